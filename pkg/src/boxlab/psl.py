"""Projective 2x2 matrix groups over Z/q^n.

Matrices are 4-tuples (a, b, c, d) for [[a, b], [c, d]].  The canonical
representative of a projective class scales the first entry that is a unit
mod q^n (scan order a, b, c, d) to 1; at least one entry is a unit because
the determinant is.  This identifies M with -M, so canonical tuples carry
PSL elements whenever the determinant is a square.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ResourceLimitError
from .quaternion import Quat

Mat = tuple[int, int, int, int]

IDENT: Mat = (1, 0, 0, 1)


def canon(m: Mat, modulus: int, q: int) -> Mat:
    a, b, c, d = (x % modulus for x in m)
    for e in (a, b, c, d):
        if e % q:
            inv = pow(e, -1, modulus)
            return (a * inv % modulus, b * inv % modulus,
                    c * inv % modulus, d * inv % modulus)
    raise ValueError("matrix has no unit entry; determinant not a unit")


def det(m: Mat, modulus: int) -> int:
    return (m[0] * m[3] - m[1] * m[2]) % modulus


def mat_mul(x: Mat, y: Mat, modulus: int, q: int) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return canon((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h),
                 modulus, q)


def mat_inv(x: Mat, modulus: int, q: int) -> Mat:
    a, b, c, d = x
    return canon((d, -b, -c, a), modulus, q)


def mat_pow(x: Mat, e: int, modulus: int, q: int) -> Mat:
    out = canon(IDENT, modulus, q)
    base = x
    while e:
        if e & 1:
            out = mat_mul(out, base, modulus, q)
        base = mat_mul(base, base, modulus, q)
        e >>= 1
    return out


def commutator(x: Mat, y: Mat, modulus: int, q: int) -> Mat:
    xy = mat_mul(x, y, modulus, q)
    yx = mat_mul(y, x, modulus, q)
    return mat_mul(xy, mat_inv(yx, modulus, q), modulus, q)


def lps_embed(g: Quat, q: int, n: int, eps: int) -> Mat:
    """Matrix [[x0 + x1*e, x2 + x3*e], [-x2 + x3*e, x0 - x1*e]] mod q^n,
    canonicalised.  The determinant before normalisation is the quaternion
    norm since e^2 = -1."""
    modulus = q ** n
    if (eps * eps + 1) % modulus != 0:
        raise ValueError(f"eps^2 != -1 mod {q}^{n}")
    x0, x1, x2, x3 = g
    return canon((x0 + x1 * eps, x2 + x3 * eps, -x2 + x3 * eps, x0 - x1 * eps),
                 modulus, q)


def lps_letter_images(gens, q: int, n: int, eps: int) -> list[Mat]:
    """Images of the interleaved generator letters at level n."""
    return [lps_embed(g, q, n, eps) for g in gens.elements]


def reduce_level(m: Mat, q: int, n: int, k: int) -> Mat:
    """Entrywise reduction from level n to level k, re-canonicalised."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    return canon(m, q ** k, q)


def psl_order(q: int, n: int) -> int:
    return q ** (3 * n - 2) * (q * q - 1) // 2


def psl_elements(q: int, n: int, cap: int = 10 ** 7) -> list[Mat]:
    """Every element of PSL(2, Z/q^n) as a canonical tuple.

    Enumerates SL matrices directly: with a a unit, d is determined by
    b, c; otherwise b must be a unit and c is determined by d.
    """
    modulus = q ** n
    expected = psl_order(q, n)
    if expected > cap:
        raise ResourceLimitError(f"PSL(2, {q}^{n}) has {expected} > cap elements")
    seen: set[Mat] = set()
    for a in range(modulus):
        if a % q:
            ainv = pow(a, -1, modulus)
            for b in range(modulus):
                for c in range(modulus):
                    d = (1 + b * c) * ainv % modulus
                    seen.add(canon((a, b, c, d), modulus, q))
        else:
            for b in range(modulus):
                if b % q == 0:
                    continue
                binv = pow(b, -1, modulus)
                for d in range(modulus):
                    c = (a * d - 1) * binv % modulus
                    seen.add(canon((a, b, c, d), modulus, q))
    assert len(seen) == expected
    return sorted(seen)


def subgroup_closure(gens: list[Mat], modulus: int, q: int,
                     cap: int = 10 ** 7) -> list[Mat]:
    """Breadth-first closure under right multiplication; insertion-ordered."""
    identity = canon(IDENT, modulus, q)
    elements = [identity]
    index = {identity}
    frontier = [identity]
    gens = [canon(g, modulus, q) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mat_mul(x, g, modulus, q)
                if y not in index:
                    if len(elements) >= cap:
                        raise ResourceLimitError(f"closure exceeded cap {cap}")
                    index.add(y)
                    elements.append(y)
                    nxt.append(y)
        frontier = nxt
    return elements


@dataclass(frozen=True)
class CongruenceKernel:
    """Elements of PSL(2, q^n) reducing to the identity at level k."""

    q: int
    n: int
    k: int
    elements: tuple[Mat, ...]

    @property
    def modulus(self) -> int:
        return self.q ** self.n

    def __len__(self) -> int:
        return len(self.elements)

    def is_abelian(self) -> bool:
        mod, q = self.modulus, self.q
        for i, x in enumerate(self.elements):
            for y in self.elements[i + 1:]:
                if mat_mul(x, y, mod, q) != mat_mul(y, x, mod, q):
                    return False
        return True

    def exponent_divides(self, e: int) -> bool:
        mod, q = self.modulus, self.q
        ident = canon(IDENT, mod, q)
        return all(mat_pow(x, e, mod, q) == ident for x in self.elements)


def kernel_enumerate(q: int, n: int, k: int, cap: int = 10 ** 7) -> CongruenceKernel:
    """The kernel of reduction PSL(2, q^n) -> PSL(2, q^k), enumerated.

    Parametrised by I + q^k * [[x, y], [z, w]] with w forced by det = 1,
    giving exactly q^(3*(n-k)) elements.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    size = q ** (3 * (n - k))
    if size > cap:
        raise ResourceLimitError(f"kernel size {size} exceeds cap {cap}")
    modulus = q ** n
    qk = q ** k
    r = q ** (n - k)
    elems = []
    for x in range(r):
        top = 1 + qk * x
        top_inv = pow(top, -1, modulus)
        for y in range(r):
            for z in range(r):
                w = (-x + qk * y * z) * top_inv % r
                m = canon((top, qk * y, qk * z, 1 + qk * w), modulus, q)
                elems.append(m)
    assert len(set(elems)) == size
    return CongruenceKernel(q=q, n=n, k=k, elements=tuple(elems))


def mgen_generators(q: int, n: int) -> tuple[Mat, Mat, Mat]:
    """Diagonal and unipotent generators of the level n-1 -> n kernel.

    For k <= n - 3 the diagonal generator equals, exactly mod q^n, the
    commutator of [[1, q^(k+1)], [0, 1]] and [[1, 0], [q^(n-k-2), 1]].
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    modulus = q ** n
    t = q ** (n - 1)
    diag = canon((1 + t, 0, 0, 1 - t), modulus, q)
    upper = canon((1, t, 0, 1), modulus, q)
    lower = canon((1, 0, t, 1), modulus, q)
    return diag, upper, lower


def mgen_commutator_identity(q: int, n: int, k: int) -> bool:
    """Whether [[1+q^(n-1), 0], [0, 1-q^(n-1)]] equals the commutator of
    [[1, q^(k+1)], [0, 1]] and [[1, 0], [q^(n-k-2), 1]] mod q^n."""
    if not 0 <= k < n - 2:
        raise ValueError(f"need 0 <= k < n - 2, got k={k}, n={n}")
    modulus = q ** n
    upper = canon((1, q ** (k + 1), 0, 1), modulus, q)
    lower = canon((1, 0, q ** (n - k - 2), 1), modulus, q)
    diag = mgen_generators(q, n)[0]
    return commutator(upper, lower, modulus, q) == diag


@dataclass(frozen=True)
class GammaImageReport:
    q: int
    n: int
    k: int
    generated_order: int
    expected_order: int
    passed: bool


def gamma_image_check(q: int, n: int, k: int, cap: int = 10 ** 7) -> GammaImageReport:
    """Check that q-th powers and commutators of the level-k kernel generate
    exactly the level-(k+1) kernel inside PSL(2, q^n).

    Generating from the images suffices: the image of a generated subgroup
    under a surjection is generated by the images of the generators.
    """
    if not 0 < k < n:
        raise ValueError(f"need 0 < k < n, got k={k}, n={n}")
    modulus = q ** n
    kernel = kernel_enumerate(q, n, k, cap=cap).elements
    target = set(kernel_enumerate(q, n, k + 1, cap=cap).elements)
    gens: list[Mat] = []
    seen: set[Mat] = set()
    for x in kernel:
        p = mat_pow(x, q, modulus, q)
        if p not in seen:
            seen.add(p)
            gens.append(p)
    inverses = [mat_inv(x, modulus, q) for x in kernel]
    for i, x in enumerate(kernel):
        xi = inverses[i]
        for j, y in enumerate(kernel):
            c = mat_mul(mat_mul(x, y, modulus, q),
                        mat_mul(xi, inverses[j], modulus, q), modulus, q)
            if c not in seen:
                seen.add(c)
                gens.append(c)
    closure = subgroup_closure(gens, modulus, q, cap=cap)
    return GammaImageReport(q=q, n=n, k=k, generated_order=len(closure),
                            expected_order=len(target),
                            passed=set(closure) == target)
