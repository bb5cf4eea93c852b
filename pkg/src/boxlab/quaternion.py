"""Integer quaternions: norm-p generator sets, power-of-5 classes, loop counting.

Quaternions of norm a power of 5 are identified when they differ by a power
of 5 and a sign; the canonical class representative is 5-primitive with its
first nonzero coefficient positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .zmod import is_prime


class Quat(NamedTuple):
    x0: int
    x1: int
    x2: int
    x3: int

    def __mul__(self, other):  # type: ignore[override]
        a0, a1, a2, a3 = self
        b0, b1, b2, b3 = other
        return Quat(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    def conjugate(self) -> "Quat":
        return Quat(self.x0, -self.x1, -self.x2, -self.x3)

    def norm(self) -> int:
        return self.x0 ** 2 + self.x1 ** 2 + self.x2 ** 2 + self.x3 ** 2


ONE = Quat(1, 0, 0, 0)


def canonical_class(x: Quat) -> Quat:
    """Canonical representative: divide out powers of 5, make the first
    nonzero coefficient positive."""
    if x == (0, 0, 0, 0):
        raise ValueError("zero quaternion has no class")
    while all(c % 5 == 0 for c in x):
        x = Quat(*(c // 5 for c in x))
    for c in x:
        if c != 0:
            if c < 0:
                x = Quat(*(-v for v in x))
            break
    return x


def class_mul(a: Quat, b: Quat) -> Quat:
    return canonical_class(a * b)


def is_power_of_5(n: int) -> bool:
    if n < 1:
        return False
    while n % 5 == 0:
        n //= 5
    return n == 1


def class_inv(a: Quat) -> Quat:
    """Inverse of a class of 5-power norm is its conjugate's class."""
    if not is_power_of_5(a.norm()):
        raise ValueError("inverse defined only for classes of 5-power norm")
    return canonical_class(a.conjugate())


@dataclass(frozen=True)
class GeneratorSet:
    """The p+1 norm-p quaternions with odd positive real part and even
    imaginary parts, interleaved as (g, conj(g)) pairs so letter l has
    inverse letter l ^ 1."""

    p: int
    elements: tuple[Quat, ...]

    def inverse_letter(self, letter: int) -> int:
        return letter ^ 1

    def __len__(self) -> int:
        return len(self.elements)


def quaternion_generators(p: int) -> GeneratorSet:
    """Enumerate the p+1 solutions of x0^2+x1^2+x2^2+x3^2 = p with x0 > 0 odd
    and x1, x2, x3 even."""
    if p % 4 != 1 or not is_prime(p):
        raise ValueError(f"p must be a prime = 1 mod 4, got {p}")
    bound = math.isqrt(p)
    even_bound = bound - bound % 2
    sols = []
    for x0 in range(1, bound + 1, 2):
        for x1 in range(-even_bound, even_bound + 1, 2):
            for x2 in range(-even_bound, even_bound + 1, 2):
                rem = p - x0 * x0 - x1 * x1 - x2 * x2
                if rem < 0:
                    continue
                x3 = math.isqrt(rem)
                if x3 * x3 != rem or x3 % 2 != 0:
                    continue
                for s3 in ({x3, -x3} if x3 else {0}):
                    sols.append(Quat(x0, x1, x2, s3))
    assert len(sols) == p + 1, f"expected {p + 1} solutions, found {len(sols)}"
    positives = [s for s in sols if _first_imag_sign(s) > 0]
    positives.sort(reverse=True)
    elements: list[Quat] = []
    for g in positives:
        elements.append(g)
        elements.append(g.conjugate())
    gens = GeneratorSet(p=p, elements=tuple(elements))
    assert set(gens.elements) == set(sols)
    return gens


def _first_imag_sign(x: Quat) -> int:
    for c in (x.x1, x.x2, x.x3):
        if c:
            return 1 if c > 0 else -1
    return 0


def word_to_class(word: Sequence[int], gens: GeneratorSet) -> Quat:
    """Class of the product of generator letters along a reduced word.

    The representative of a reduced word of length m has norm exactly 5^m;
    non-reduced words are rejected.
    """
    for i, letter in enumerate(word):
        if not 0 <= letter < len(gens.elements):
            raise ValueError(f"letter {letter} out of range")
        if i and word[i - 1] == letter ^ 1:
            raise ValueError(f"word not reduced at position {i}")
    out = ONE
    for letter in word:
        out = out * gens.elements[letter]
    out = canonical_class(out)
    assert out.norm() == 5 ** len(word)
    return out


# --- counting three-square representations -------------------------------

_R2_TABLE = None  # cumulative table of r2(v) = #{(a, b) in Z^2 : a^2 + b^2 = v}


def _r2_upto(limit: int):
    global _R2_TABLE
    import numpy as np

    if _R2_TABLE is not None and len(_R2_TABLE) > limit:
        return _R2_TABLE
    table = np.zeros(limit + 1, dtype=np.int64)
    amax = math.isqrt(limit)
    squares = np.arange(amax + 1, dtype=np.int64) ** 2
    for a in range(amax + 1):
        wa = 2 if a else 1
        rest = limit - a * a
        bmax = math.isqrt(rest)
        idx = a * a + squares[: bmax + 1]
        weights = np.full(bmax + 1, 2 * wa, dtype=np.int64)
        weights[0] = wa
        np.add.at(table, idx, weights)
    _R2_TABLE = table
    return table


def count_three_squares(x: int) -> int:
    """Number of ordered integer triples (a, b, c) with a^2 + b^2 + c^2 = x."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return 1
    table = _r2_upto(x)
    total = 0
    for c in range(math.isqrt(x) + 1):
        wc = 2 if c else 1
        total += wc * int(table[x - c * c])
    return total


def loop_count_quat(n: int, m: int, q: int) -> int:
    """Exact count of quaternions of norm 5^m of the shape fixed by level n.

    Counted are x0 + x1 i + x2 j + x3 k with x0 odd and x1, x2, x3 = 0
    mod 2*q^n, i.e. the norm-5^m representatives of classes trivial at level
    n.  x0 is restricted to +-5^(m/2) mod q^(2n) before enumerating
    three-square decompositions of the remainder.  m must be even.
    """
    if m < 0 or m % 2 != 0:
        raise ValueError(f"m must be even and nonnegative, got {m}")
    if n < 0:
        raise ValueError(f"level must be >= 0, got {n}")
    s = 5 ** (m // 2)
    qq = q ** (2 * n)
    if n == 0:
        candidates = range(-s, s + 1, 2)  # s odd, so this is every odd value
    else:
        residues = {s % qq, (-s) % qq}
        candidates = [
            a
            for r in sorted(residues)
            for a in range(r - ((r + s) // qq) * qq, s + 1, qq)
            if a % 2 != 0
        ]
    total = 0
    divisor = 4 * qq
    for a in candidates:
        rem = 5 ** m - a * a
        if rem < 0:
            continue
        assert rem % divisor == 0
        total += count_three_squares(rem // divisor)
    return total
