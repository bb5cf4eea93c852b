"""Irreducible representations of the upper-triangular congruence groups.

The group at parameters (q, k, n) consists of pairs (a, b) with a a unit
congruent to 1 mod q^k and b congruent to 0 mod q^k, both mod q^n, composing
as the matrices [[a, b], [0, a^-1]].  Every irreducible representation here
is monomial, so matrices are stored exactly as a basis permutation plus
root-of-unity exponents mod q^n; floats only enter the orthogonality audit.

The dimension law (probe level l on the unipotent part forces dimension
q^(n-2k-l)) is the checkable ingredient behind lower bounds on
representations of the much larger quotient groups, whose restriction to the
subgroup at parameters (k+1, n) with probe level k+1 has dimension
q^(n-3k-3); those quotients themselves are far beyond enumeration.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError
from .zmod import is_prime

Element = tuple[int, int]


@dataclass(eq=False)
class BorelGroup:
    q: int
    k: int
    n: int
    elements: list[Element]
    index: dict[Element, int] = field(repr=False)
    beta_of: dict[int, int] = field(repr=False)   # a value -> exponent of 1 + q^k
    a_inv: dict[int, int] = field(repr=False)

    @property
    def modulus(self) -> int:
        return self.q ** self.n

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Element:
        return (1, 0)

    def mul(self, g: Element, h: Element) -> Element:
        a, b = g
        a2, b2 = h
        mod = self.modulus
        return (a * a2 % mod, (a * b2 + b * self.a_inv[a2]) % mod)

    def inv(self, g: Element) -> Element:
        a, b = g
        return (self.a_inv[a], -b % self.modulus)

    def beta(self, g: Element) -> int:
        return self.beta_of[g[0]]

    def project(self, g: Element) -> Element:
        """Reduction onto the level n-1 group."""
        mod = self.q ** (self.n - 1)
        return (g[0] % mod, g[1] % mod)


def borel_group(q: int, k: int, n: int, cap: int = 10 ** 6) -> BorelGroup:
    """Full enumeration; the order is q^(2(n-k))."""
    if not is_prime(q) or q % 2 == 0:
        raise ValueError(f"q must be an odd prime, got {q}")
    if not 0 < 2 * k <= n:
        raise ValueError(f"need 0 < 2k <= n, got k={k}, n={n}")
    order = q ** (2 * (n - k))
    if order > cap:
        raise ResourceLimitError(f"group order {order} exceeds cap {cap}")
    mod = q ** n
    gen = 1 + q ** k
    a_order = q ** (n - k)
    beta_of = {}
    a = 1
    for e in range(a_order):
        beta_of[a] = e
        a = a * gen % mod
    assert a == 1, "1 + q^k must have order q^(n-k)"
    a_inv = {v: pow(v, -1, mod) for v in beta_of}
    b_values = range(0, mod, q ** k)
    elements = [(av, b) for av in sorted(beta_of, key=beta_of.get)
                for b in b_values]
    assert len(elements) == order
    return BorelGroup(q=q, k=k, n=n, elements=elements,
                      index={e: i for i, e in enumerate(elements)},
                      beta_of=beta_of, a_inv=a_inv)


# --- monomial representations ------------------------------------------------

Monomial = tuple[tuple[int, ...], tuple[int, ...]]  # (perm, phase exponents)


def monomial_mul(x: Monomial, y: Monomial, denominator: int) -> Monomial:
    """Matrix product of monomial matrices: column c goes through y then x."""
    px, fx = x
    py, fy = y
    perm = tuple(px[py[c]] for c in range(len(py)))
    phases = tuple((fy[c] + fx[py[c]]) % denominator for c in range(len(py)))
    return perm, phases


@dataclass(eq=False)
class Irrep:
    """One irreducible representation, evaluated on demand.

    kind "diag": the character (a, b) -> exp(2 pi i beta j / q^(n-k)).
    kind "character": the base abelian case n = 2k, parameters (j, jp)
    giving the character exp(2 pi i (beta j + btilde jp) / q^k).
    kind "induced": parameters (j, jp) with j not divisible by q; acts on
    basis {x = j mod q^k} by (a, b): xi_x -> phase(a^-1 b x) xi_(a^-2 x),
    tensored with the diagonal character of index jp.
    kind "lift": a level n-1 irrep precomposed with reduction, tensored with
    the diagonal character of index j in [0, q).
    """

    group: BorelGroup
    kind: str
    dim: int
    j: int | None = None
    jp: int | None = None
    base: "Irrep | None" = None
    rep_id: str = ""

    def matrix(self, g: Element) -> Monomial:
        group = self.group
        q, k, n = group.q, group.k, group.n
        mod = group.modulus
        if self.kind == "diag":
            return (0,), (group.beta(g) * self.j * q ** k % mod,)
        if self.kind == "character":
            b = g[1]
            expo = (group.beta(g) * self.j + (b // q ** k) * self.jp) \
                * q ** (n - k) % mod
            return (0,), (expo,)
        if self.kind == "induced":
            a, b = g
            ainv = group.a_inv[a]
            r = q ** (n - k)
            step = q ** k
            rho = group.beta(g) * self.jp * step % mod
            perm = []
            phases = []
            ainv2 = ainv * ainv % r
            for t in range(self.dim):
                x = self.j + step * t
                target = ainv2 * x % r
                perm.append((target - self.j) // step)
                phases.append((ainv * b * x + rho) % mod)
            return tuple(perm), tuple(phases)
        if self.kind == "lift":
            perm, phases = self.base.matrix(group.project(g))
            rho = group.beta(g) * self.j * q ** k % mod
            return perm, tuple((p * q + rho) % mod for p in phases)
        raise ValueError(f"unknown kind {self.kind!r}")

    def char(self, g: Element) -> complex:
        perm, phases = self.matrix(g)
        mod = self.group.modulus
        total = 0j
        for c, target in enumerate(perm):
            if target == c:
                total += cmath.exp(2j * cmath.pi * phases[c] / mod)
        return total

    def dense(self, g: Element) -> np.ndarray:
        perm, phases = self.matrix(g)
        mod = self.group.modulus
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for c, target in enumerate(perm):
            out[target, c] = cmath.exp(2j * cmath.pi * phases[c] / mod)
        return out

    def is_trivial_at(self, g: Element) -> bool:
        perm, phases = self.matrix(g)
        return all(t == c for c, t in enumerate(perm)) and \
            all(p == 0 for p in phases)


def diagonal_character(group: BorelGroup, j: int) -> Irrep:
    """One-dimensional character (a, b) -> exp(2 pi i beta j / q^(n-k))."""
    if not 0 <= j < group.q ** group.k:
        raise ValueError(f"j out of range: {j}")
    return Irrep(group=group, kind="diag", dim=1, j=j, rep_id=f"diag(j={j})")


def induced_rep(group: BorelGroup, j: int, jp: int = 0) -> Irrep:
    """Induced representation on basis {x = j mod q^k}; j must not be
    divisible by q."""
    q, k, n = group.q, group.k, group.n
    if not 0 <= j < q ** k:
        raise ValueError(f"j out of range: {j}")
    if j % q == 0:
        raise ValueError(f"induced representation needs j nonzero mod q, got {j}")
    return Irrep(group=group, kind="induced", dim=q ** (n - 2 * k), j=j, jp=jp,
                 rep_id=f"ind(j={j})*diag(j'={jp})")


def _inventory(group: BorelGroup) -> list[Irrep]:
    q, k, n = group.q, group.k, group.n
    if n == 2 * k:
        return [Irrep(group=group, kind="character", dim=1, j=c, jp=d,
                      rep_id=f"char(c={c},d={d})")
                for c in range(q ** k) for d in range(q ** k)]
    out = [induced_rep(group, j, jp)
           for j in range(q ** k) if j % q
           for jp in range(q ** k)]
    lower = borel_group(q, k, n - 1)
    for sigma in _inventory(lower):
        for j in range(q):
            out.append(Irrep(group=group, kind="lift", dim=sigma.dim, j=j,
                             base=sigma,
                             rep_id=f"lift[{sigma.rep_id}]*diag(j={j})"))
    return out


@dataclass(eq=False)
class CharacterTable:
    group: BorelGroup
    irreps: tuple[Irrep, ...]
    char_matrix: np.ndarray          # irreps x elements
    gram_defect: float

    def dimensions(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for r in self.irreps:
            out[r.dim] = out.get(r.dim, 0) + 1
        return out


def irrep_inventory(group: BorelGroup, tolerance: float = 1e-9) -> CharacterTable:
    """Full inventory with completeness and orthonormality audits; failure of
    either is a construction bug and raises."""
    irreps = tuple(_inventory(group))
    total = sum(r.dim ** 2 for r in irreps)
    if total != group.order:
        raise RuntimeError(
            f"completeness failure: sum of squared dimensions {total} != "
            f"group order {group.order}")
    chars = np.array([[r.char(g) for g in group.elements] for r in irreps])
    gram = chars @ chars.conj().T / group.order
    defect = float(np.abs(gram - np.eye(len(irreps))).max())
    if defect > tolerance:
        raise RuntimeError(f"character orthonormality defect {defect}")
    return CharacterTable(group=group, irreps=irreps, char_matrix=chars,
                          gram_defect=defect)


def dimension_by_level(group: BorelGroup, irrep: Irrep) -> tuple[int, int]:
    """Probe level and predicted dimension.

    s is the least exponent with the representation trivial on
    [[1, q^s], [0, 1]]; the reported level is l = min(n - s, n - 2k), and the
    predicted dimension q^(n - 2k - l) must match.  The cap applies only to
    one-dimensional representations that are trivial on the whole unipotent
    part earlier than the classification range covers.
    """
    q, k, n = group.q, group.k, group.n
    mod = group.modulus
    s = k
    while s <= n:
        if irrep.is_trivial_at((1, q ** s % mod)):
            break
        s += 1
    level = min(n - s, n - 2 * k)
    return level, q ** (n - 2 * k - level)


def classify_all(table: CharacterTable) -> list[tuple[str, int, int]]:
    """(rep id, probe level, dimension) with the dimension law asserted."""
    out = []
    for r in table.irreps:
        level, predicted = dimension_by_level(table.group, r)
        if predicted != r.dim:
            raise RuntimeError(
                f"dimension law fails for {r.rep_id}: level {level}, "
                f"predicted {predicted}, actual {r.dim}")
        out.append((r.rep_id, level, r.dim))
    return out


def export_character_table_csv(table: CharacterTable, path: str) -> None:
    with open(path, "w") as fh:
        fh.write("id,kind,j,jp,dimension,level\n")
        for r in table.irreps:
            level, _ = dimension_by_level(table.group, r)
            fh.write(f"{r.rep_id},{r.kind},{r.j},{r.jp},{r.dim},{level}\n")


# --- numeric oracle -----------------------------------------------------------


def brute_force_irreps(elements, mul, seed: int = 0, retries: int = 5,
                       cap: int = 1000) -> dict[int, int]:
    """Irreducible dimensions with multiplicities, found by diagonalising a
    random self-adjoint operator commuting with the left regular
    representation.  Eigenvalue multiplicities of such an operator are the
    irreducible dimensions, each dimension d occurring d times per
    irreducible of that dimension."""
    elements = list(elements)
    size = len(elements)
    if size > cap:
        raise ResourceLimitError(f"group order {size} exceeds cap {cap}")
    index = {e: i for i, e in enumerate(elements)}
    identity = next(e for e in elements
                    if mul(e, elements[0]) == elements[0]
                    and mul(elements[0], e) == elements[0])
    inv = [index[next(h for h in elements if mul(g, h) == identity)]
           for g in elements]
    mul_idx = [[index[mul(elements[i], elements[j])] for j in range(size)]
               for i in range(size)]

    for attempt in range(retries):
        rng = np.random.default_rng(seed + attempt)
        y = np.zeros(size, dtype=complex)
        for i in range(size):
            if y[i] != 0:
                continue
            if inv[i] == i:
                y[i] = rng.standard_normal()
            else:
                z = rng.standard_normal() + 1j * rng.standard_normal()
                y[i] = z
                y[inv[i]] = z.conjugate()
        h = np.empty((size, size), dtype=complex)
        for jcol in range(size):
            ij = inv[jcol]
            row = mul_idx[ij]
            for i in range(size):
                h[i, jcol] = y[row[i]]
        vals = np.linalg.eigvalsh(h)
        scale = max(1.0, float(np.abs(vals).max()))
        tol = 1e-6 * scale
        mults = []
        current = 1
        for i in range(1, size):
            if vals[i] - vals[i - 1] <= tol:
                current += 1
            else:
                mults.append(current)
                current = 1
        mults.append(current)
        counts: dict[int, int] = {}
        for m in mults:
            counts[m] = counts.get(m, 0) + 1
        if any(c % d for d, c in counts.items()):
            continue
        dims = {d: c // d for d, c in counts.items()}
        if sum(d * d * c for d, c in dims.items()) == size:
            return dims
    raise RuntimeError("eigenvalue clustering failed after retries")
