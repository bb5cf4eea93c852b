import random

import pytest

from boxlab import psl
from boxlab.quaternion import Quat, quaternion_generators
from boxlab.zmod import LpsParams


def random_reduced_word(rng, length):
    word = []
    for _ in range(length):
        letter = rng.randrange(6)
        while word and letter == word[-1] ^ 1:
            letter = rng.randrange(6)
        word.append(letter)
    return word


def word_image(word, mats, modulus, q):
    out = psl.canon(psl.IDENT, modulus, q)
    for letter in word:
        out = psl.mat_mul(out, mats[letter], modulus, q)
    return out


def test_lps_embed_one_plus_two_i():
    m = psl.lps_embed(Quat(1, 2, 0, 0), 29, 1, 12)
    raw = (25, 0, 0, 6)
    assert (raw[0] * raw[3] - raw[1] * raw[2]) % 29 == 5
    assert m == psl.canon(raw, 29, 29)


def test_lps_embed_one_plus_two_j():
    m = psl.lps_embed(Quat(1, 0, 2, 0), 29, 1, 12)
    assert m == psl.canon((1, 2, -2, 1), 29, 29)


def test_lps_embed_identity():
    assert psl.lps_embed(Quat(1, 0, 0, 0), 29, 1, 12) == psl.canon(psl.IDENT, 29, 29)


def test_lps_embed_determinant_is_p():
    params = LpsParams.build(29, 3)
    gens = quaternion_generators(5)
    for n in (1, 2, 3):
        modulus = 29 ** n
        eps = params.epsilon(n)
        for g in gens.elements:
            x0, x1, x2, x3 = g
            raw = (x0 + x1 * eps, x2 + x3 * eps, -x2 + x3 * eps, x0 - x1 * eps)
            assert psl.det(raw, modulus) == 5 % modulus


def test_lps_embed_rejects_bad_eps():
    with pytest.raises(ValueError):
        psl.lps_embed(Quat(1, 2, 0, 0), 29, 1, 11)


def test_conjugate_embeds_to_inverse():
    params = LpsParams.build(29, 2)
    gens = quaternion_generators(5)
    for n in (1, 2):
        modulus = 29 ** n
        for g in gens.elements:
            a = psl.lps_embed(g, 29, n, params.epsilon(n))
            b = psl.lps_embed(g.conjugate(), 29, n, params.epsilon(n))
            assert psl.mat_inv(a, modulus, 29) == b


def test_embed_is_homomorphism_on_words():
    params = LpsParams.build(29, 2)
    gens = quaternion_generators(5)
    rng = random.Random(4)
    for n in (1, 2):
        modulus = 29 ** n
        eps = params.epsilon(n)
        mats = psl.lps_letter_images(gens, 29, n, eps)
        from boxlab.quaternion import word_to_class

        for _ in range(40):
            w = random_reduced_word(rng, rng.randint(0, 6))
            via_quat = psl.lps_embed(word_to_class(w, gens), 29, n, eps)
            assert word_image(w, mats, modulus, 29) == via_quat


def test_reduce_identity_and_homomorphism():
    params = LpsParams.build(29, 2)
    gens = quaternion_generators(5)
    mats = psl.lps_letter_images(gens, 29, 2, params.epsilon(2))
    modulus = 29 ** 2
    ident = psl.canon(psl.IDENT, modulus, 29)
    assert psl.reduce_level(ident, 29, 2, 1) == psl.canon(psl.IDENT, 29, 29)
    rng = random.Random(5)
    for _ in range(40):
        g = word_image(random_reduced_word(rng, 5), mats, modulus, 29)
        h = word_image(random_reduced_word(rng, 5), mats, modulus, 29)
        lhs = psl.reduce_level(psl.mat_mul(g, h, modulus, 29), 29, 2, 1)
        rhs = psl.mat_mul(psl.reduce_level(g, 29, 2, 1),
                          psl.reduce_level(h, 29, 2, 1), 29, 29)
        assert lhs == rhs


def test_reduce_compatible_with_eps_chain():
    params = LpsParams.build(29, 3)
    gens = quaternion_generators(5)
    for g in gens.elements:
        at3 = psl.lps_embed(g, 29, 3, params.epsilon(3))
        at1 = psl.lps_embed(g, 29, 1, params.epsilon(1))
        assert psl.reduce_level(at3, 29, 3, 1) == at1


def test_kernel_sizes_and_structure():
    kernel = psl.kernel_enumerate(3, 2, 1)
    assert len(kernel) == 27
    assert kernel.is_abelian()
    assert kernel.exponent_divides(3)
    ident = psl.canon(psl.IDENT, 9, 3)
    assert sum(1 for x in kernel.elements if x != ident
               and psl.mat_pow(x, 3, 9, 3) == ident) == 26

    assert len(psl.kernel_enumerate(5, 2, 1)) == 125
    assert psl.kernel_enumerate(3, 1, 1).elements == (psl.canon(psl.IDENT, 3, 3),)


def test_kernel_matches_brute_force_enumeration():
    kernel = set(psl.kernel_enumerate(3, 2, 1).elements)
    ident = psl.canon(psl.IDENT, 3, 3)
    brute = {m for m in psl.psl_elements(3, 2)
             if psl.reduce_level(m, 3, 2, 1) == ident}
    assert kernel == brute


def test_psl_order_formula_vs_brute_count():
    assert len(psl.psl_elements(3, 1)) == psl.psl_order(3, 1) == 12
    assert len(psl.psl_elements(5, 1)) == psl.psl_order(5, 1) == 60
    assert psl.psl_order(29, 1) == 12180


def test_closure_of_lps_generators_is_full_psl():
    params = LpsParams.build(29, 1)
    gens = quaternion_generators(5)
    mats = psl.lps_letter_images(gens, 29, 1, params.epsilon(1))
    closure = psl.subgroup_closure(mats, 29, 29)
    assert len(closure) == 12180
    assert set(closure) == set(psl.psl_elements(29, 1))


def test_closure_small_cases():
    assert psl.subgroup_closure([psl.canon(psl.IDENT, 9, 3)], 9, 3) == \
        [psl.canon(psl.IDENT, 9, 3)]
    closure = psl.subgroup_closure(list(psl.mgen_generators(3, 2)), 9, 3)
    assert len(closure) == 27
    assert set(closure) == set(psl.kernel_enumerate(3, 2, 1).elements)


def test_mgen_generator_orders():
    for q, n in [(3, 2), (3, 3), (5, 2)]:
        modulus = q ** n
        ident = psl.canon(psl.IDENT, modulus, q)
        for g in psl.mgen_generators(q, n):
            assert psl.mat_pow(g, q, modulus, q) == ident
            assert g != ident


def test_mgen_commutator_identity():
    assert psl.mgen_commutator_identity(3, 3, 0)
    assert psl.mgen_commutator_identity(3, 4, 0)
    assert psl.mgen_commutator_identity(3, 4, 1)
    assert psl.mgen_commutator_identity(5, 4, 1)
    with pytest.raises(ValueError):
        psl.mgen_commutator_identity(3, 3, 1)


def test_gamma_image_check():
    for q, n, k in [(3, 2, 1), (3, 3, 1), (5, 2, 1)]:
        report = psl.gamma_image_check(q, n, k)
        assert report.passed, report
    r = psl.gamma_image_check(3, 3, 1)
    assert r.expected_order == 27


def test_gamma_image_trivial_target():
    report = psl.gamma_image_check(3, 2, 1)
    assert report.generated_order == 1
    assert report.expected_order == 1
