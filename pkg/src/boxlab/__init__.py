"""boxlab: desk-scale algebraic and spectral graph constructions.

Subpackages cover exact arithmetic mod q^n, integer quaternion classes,
projective matrix groups, free-group word machinery, graph covers, spectra,
Poincare-type certificates and representation audits, plus a small CLI.
"""

__version__ = "0.1.0"
