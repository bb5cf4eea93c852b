"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

The underlying checks live in boxlab.suites so the CLI pipeline runs the
same bundles.
"""

import json

from boxlab import suites


def _report(result):
    status = "PASS" if result["passed"] else "FAIL"
    print(f"[{status}] criterion {result['criterion']}: {result['name']}")
    assert result["passed"], json.dumps(result["details"], indent=2, default=str)


def test_criterion_01_ramanujan_certification():
    result = suites.criterion_ramanujan()
    details = result["details"]
    assert details["vertices"] == 12180
    assert details["regularity"] == 6
    assert not details["bipartite"]
    assert details["second_largest"] <= details["bound"] + 1e-7
    assert details["smallest"] >= -details["bound"] - 1e-7
    _report(result)


def test_criterion_02_hensel_suite():
    result = suites.criterion_hensel()
    assert result["details"]["complete_solution_sets"] > 500
    _report(result)


def test_criterion_03_admissible_primes():
    result = suites.criterion_admissible()
    found = result["details"]["found"]
    assert 29 in found and 13 not in found
    _report(result)


def test_criterion_04_subgroup_lattice():
    result = suites.criterion_subgroups()
    cases = {(c["q"], c["n"], c["k"]): c for c in result["details"]["cases"]}
    assert set(cases) == {(3, 2, 1), (3, 3, 1), (3, 4, 2), (5, 2, 1)}
    assert cases[(3, 2, 1)]["kernel_order"] == 27
    assert cases[(3, 4, 2)]["kernel_order"] == 729
    assert cases[(3, 4, 2)]["abelian"] and cases[(3, 4, 2)]["exponent_ok"]
    assert all(c["gamma_image"] for c in cases.values())
    _report(result)


def test_criterion_05_homology_covers():
    result = suites.criterion_covers()
    cases = result["details"]["cases"]
    assert len(cases) == 10   # five base graphs, m in {2, 3}
    assert all(c["vertices"] == c["m"] ** c["rank"] * _base_order(c["base"])
               for c in cases)
    _report(result)


def _base_order(name):
    return {"C6": 6, "K4": 4, "K33": 6, "petersen": 10, "cayley-psl23": 12}[name]


def test_criterion_06_lift_decomposition():
    result = suites.criterion_lift()
    for case in result["details"]["cases"]:
        assert case["lifted_match"] <= 1e-9
        assert case["max_fiber_sum"] <= 1e-8
    _report(result)


def test_criterion_07_poincare_certificates():
    result = suites.criterion_poincare()
    for cert in result["details"]["certificates"]:
        assert cert["worst_sum"] <= cert["C"] + 1e-9
    assert all(v["violated"] for v in result["details"]["adversarial"])
    _report(result)


def test_criterion_08_representation_audit():
    result = suites.criterion_reps()
    cases = {(c["q"], c["k"], c["n"]): c for c in result["details"]["cases"]}
    assert set(cases) == {(3, 1, 2), (3, 1, 3), (3, 1, 4), (5, 1, 2), (5, 1, 3)}
    for c in cases.values():
        assert c["gram_defect"] <= 1e-9
        assert c["oracle_match"] is True   # all five orders are <= 1000
    _report(result)


def test_criterion_09_loop_counts_and_traces():
    result = suites.criterion_loops()
    details = result["details"]
    assert details["petersen_girth_zeros"]
    assert details["spectral_formula_defect"] <= 1e-6
    assert details["audit_threshold"] < 6
    _report(result)


def test_criterion_10_feasibility_calculator():
    result = suites.criterion_feasibility()
    r29 = result["details"]["q29_k1"]
    assert r29["n_min"] == 6 * (6 + 2 * 29 ** 4)
    assert r29["order_bound_digits"] > 10 ** 6
    assert result["details"]["q3_k1"]["n_min"] == 1008
    _report(result)
