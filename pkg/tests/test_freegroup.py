import random

import pytest

from boxlab import psl
from boxlab.freegroup import (FiberContext, ball_size, fiber_map, homology_map,
                              is_reduced, loop_count_words,
                              loop_count_words_exact, reduce_word,
                              schreier_build, trivial_word_counts, word_inverse)
from boxlab.quaternion import loop_count_quat


def z2_quotient():
    # all three generators map to the nontrivial element of Z_2
    return schreier_build([0, 1], lambda a, b: a ^ b, 0, [1, 1, 1])


def psl23_quotient():
    elems = psl.psl_elements(3, 1)
    mul = lambda a, b: psl.mat_mul(a, b, 3, 3)
    ident = psl.canon(psl.IDENT, 3, 3)
    u = psl.canon((1, 1, 0, 1), 3, 3)
    h = psl.canon((0, 1, -1, 0), 3, 3)
    w = psl.canon((1, 0, 1, 1), 3, 3)
    return schreier_build(elems, mul, ident, [u, h, w])


def random_reduced_word(rng, length):
    word = []
    for _ in range(length):
        letter = rng.randrange(6)
        while word and letter == word[-1] ^ 1:
            letter = rng.randrange(6)
        word.append(letter)
    return tuple(word)


def test_reduce_word():
    assert reduce_word([0, 1]) == ()
    assert reduce_word([0, 2, 3, 1]) == ()
    assert reduce_word([0, 2, 2, 3]) == (0, 2)
    assert is_reduced((0, 2, 4, 0))
    assert not is_reduced((0, 1))
    assert not is_reduced((4, 5))
    assert word_inverse((0, 2)) == (3, 1)


def test_ball_size():
    assert ball_size(0) == 1
    assert ball_size(2) == 37


def test_schreier_trivial_quotient():
    sd = schreier_build([0], lambda a, b: 0, 0, [0, 0, 0])
    assert sd.n_cosets == 1
    assert sd.rank == 3


def test_schreier_z2():
    sd = z2_quotient()
    assert sd.n_cosets == 2
    assert sd.rank == 5
    # explicit Schreier generators: x1^2, x1 x2, x1 x3, x2 x1, ... audit table
    for c in range(2):
        for l in range(6):
            assert sd.table[c][l] == c ^ 1


def test_schreier_psl23():
    sd = psl23_quotient()
    assert sd.n_cosets == 12
    assert sd.rank == 25
    # table rows are permutations per letter
    for l in range(6):
        targets = [sd.table[c][l] for c in range(12)]
        assert sorted(targets) == list(range(12))
        back = [sd.table[c][l ^ 1] for c in range(12)]
        assert all(back[targets[c]] == c for c in range(12))
    # transversal is prefix-closed and shortest
    words = set(sd.transversal)
    for w in sd.transversal:
        assert all(w[:i] in words for i in range(len(w)))


def test_schreier_rejects_non_generating():
    with pytest.raises(ValueError, match="proper subgroup"):
        schreier_build([0, 1, 2, 3], lambda a, b: a ^ b, 0, [1, 1, 1])


def test_homology_identity():
    sd = z2_quotient()
    h = homology_map((), sd, 3)
    assert h.coset == 0 and h.vector == {}
    assert h.is_identity()


def test_homology_qth_powers_vanish():
    rng = random.Random(6)
    for sd, q in [(z2_quotient(), 3), (psl23_quotient(), 5)]:
        for _ in range(20):
            w = random_reduced_word(rng, rng.randint(1, 6))
            h = homology_map(w, sd, q)
            if h.coset != 0:
                continue
            power = reduce_word(w * q)
            hp = homology_map(power, sd, q)
            assert hp.coset == 0 and hp.vector == {}


def test_homology_commutators_vanish():
    rng = random.Random(7)
    sd = z2_quotient()
    q = 3
    found = 0
    for _ in range(200):
        w1 = random_reduced_word(rng, rng.randint(1, 6))
        w2 = random_reduced_word(rng, rng.randint(1, 6))
        if homology_map(w1, sd, q).coset or homology_map(w2, sd, q).coset:
            continue
        comm = reduce_word(w1 + w2 + word_inverse(w1) + word_inverse(w2))
        h = homology_map(comm, sd, q)
        assert h.is_identity()
        found += 1
    assert found > 10


def test_homology_map_is_homomorphism():
    rng = random.Random(8)
    for sd, q in [(z2_quotient(), 3), (psl23_quotient(), 3)]:
        for _ in range(50):
            w1 = random_reduced_word(rng, rng.randint(0, 7))
            w2 = random_reduced_word(rng, rng.randint(0, 7))
            lhs = homology_map(reduce_word(w1 + w2), sd, q)
            rhs = homology_map(w1, sd, q) * homology_map(w2, sd, q)
            assert lhs == rhs


@pytest.fixture(scope="module")
def ctx29_21():
    return FiberContext.build(29, 2, 1)


@pytest.fixture(scope="module")
def ctx29_11():
    return FiberContext.build(29, 1, 1)


def test_fiber_map_identity_and_homomorphism(ctx29_21):
    ctx = ctx29_21
    modulus = 29 ** 2
    mat, hom = fiber_map((), ctx)
    assert mat == psl.canon(psl.IDENT, modulus, 29)
    assert hom.is_identity()
    rng = random.Random(9)
    for _ in range(30):
        w1 = random_reduced_word(rng, rng.randint(0, 6))
        w2 = random_reduced_word(rng, rng.randint(0, 6))
        m1, h1 = fiber_map(w1, ctx)
        m2, h2 = fiber_map(w2, ctx)
        m12, h12 = fiber_map(reduce_word(w1 + w2), ctx)
        assert psl.mat_mul(m1, m2, modulus, 29) == m12
        assert h1 * h2 == h12


def test_fiber_map_rejects_unreduced():
    ctx = FiberContext.build(29, 1, None)
    with pytest.raises(ValueError):
        fiber_map((0, 1), ctx)


def test_injectivity_radius_psl29(ctx29_11):
    # no nontrivial word of length <= 4 maps to the identity pair at q=29
    counts = trivial_word_counts(1, 1, 4, 29, ctx=ctx29_11)
    assert counts == [1, 0, 0, 0, 0]


def test_ball_count_no_conditions():
    assert loop_count_words(0, None, 2, 29) == 37


def test_loop_count_psl29_small_ball():
    assert loop_count_words(1, None, 2, 29) == 1


def test_kernel_sandwich(ctx29_21, ctx29_11):
    # words trivial in the (n=2, k=1) fiber are trivial at (n=1, k=1) and at k=1
    q = 29
    rng = random.Random(10)
    hits = 0
    for _ in range(500):
        w = random_reduced_word(rng, rng.randint(0, 6))
        m2, h2 = fiber_map(w, ctx29_21)
        if m2 != psl.canon(psl.IDENT, q ** 2, q) or not h2.is_identity():
            continue
        m1, h1 = fiber_map(w, ctx29_11)
        assert m1 == psl.canon(psl.IDENT, q, q)
        assert h1.is_identity()
        hits += 1
    assert hits >= 1   # at least the empty word


def test_monotone_and_parity_cross_check_with_quaternions():
    q = 29
    counts = trivial_word_counts(1, None, 6, q)
    cumulative = [sum(counts[: m + 1]) for m in range(7)]
    assert all(cumulative[m] <= cumulative[m + 1] for m in range(6))
    for m in (0, 2, 4, 6):
        expected = 2 * sum(counts[mm] for mm in range(m % 2, m + 1, 2))
        assert loop_count_quat(1, m, q) == expected


def test_quat_words_agree_n0():
    # with no congruence condition every reduced word is trivial
    for m in (0, 2, 4):
        expected = 2 * sum((6 * 5 ** (mm - 1) if mm else 1)
                           for mm in range(m % 2, m + 1, 2))
        assert loop_count_quat(0, m, 29) == expected


def test_loop_count_words_exact():
    assert loop_count_words_exact(0, None, 2, 29) == 30
    assert loop_count_words_exact(1, None, 2, 29) == 0
