import copy
from fractions import Fraction

import pytest

from hkpowers import hk
from hkpowers.filtrations import binom2, fit_hilbert_polynomial, hilbert_samuel_table
from hkpowers.ideals import (
    colength,
    contains,
    frobenius_power,
    ideal_equals,
    ideal_power,
    is_subset,
    power_sequence,
)

# Frozen oracle values: fit of the ordinary-powers table of m^[q] on the
# char-2 Fermat cubic (n up to 8 for q = 2, 4 and n up to 10 for q = 8).
FERMAT_M_COEFFS = {2: (12, 6, 1), 4: (48, 18, 4), 8: (192, 66, 10)}


@pytest.fixture(scope="module")
def fermat_red(fermat2):
    return hk.find_minimal_reduction(fermat2.maximal_ideal(), J=fermat2.ideal(["y", "z"]))


def test_rr_of_integrally_closed_ideal(plane7):
    m = plane7.maximal_ideal()
    res = hk.ratliff_rush_closure(m)
    assert ideal_equals(res.closure, m)
    assert res.stabilization_index == 1


def test_rr_remark_example(plane2):
    I = plane2.ideal(["x^4", "x^3*y", "x*y^3", "y^4"])
    res = hk.ratliff_rush_closure(I)
    assert contains(res.closure, "x^2*y^2") and not contains(I, "x^2*y^2")
    assert is_subset(I, res.closure)
    assert res.transcript[0] == (1, 10)


def test_rr_of_square_of_frobenius_power_contains_witness(fermat2):
    P2 = ideal_power(frobenius_power(fermat2.maximal_ideal(), 8), 2)
    res = hk.ratliff_rush_closure(P2)
    assert contains(res.closure, "x^2*y^4*z^13")
    assert not contains(P2, "x^2*y^4*z^13")


def test_rr_rejects_zero_ideal(plane7):
    with pytest.raises(ValueError):
        hk.ratliff_rush_closure(plane7.zero_ideal())
    with pytest.raises(ValueError):
        hk.ratliff_rush_closure(plane7.maximal_ideal(), confirm=0)


def test_rr_chain_plateau_is_repaired(fermat2):
    # the chain for m^[8] plateaus (142, 142) before reaching its union (136)
    P = frobenius_power(fermat2.maximal_ideal(), 8)
    chain = hk.ratliff_rush_chain(P, 3)
    assert [colength(K) for K in chain] == [142, 142, 136]
    assert colength(hk.ratliff_rush_closure(P).closure) == 142
    assert colength(hk.ratliff_rush_closure(P, confirm=2).closure) == 136
    closures, _, enlarged = hk.rr_filtration(P, 3)
    assert colength(closures[1]) == 136 and enlarged == [1]


def test_reduction_examples(fermat2, plane7):
    J = fermat2.ideal(["y", "z"])
    assert hk.find_minimal_reduction(J, J=J).reduction_number == 0
    assert hk.find_minimal_reduction(fermat2.maximal_ideal(), J=J).reduction_number == 2
    sq = ideal_power(plane7.maximal_ideal(), 2)
    red = hk.find_minimal_reduction(sq, J=plane7.ideal(["x^2", "y^2"]))
    assert red.reduction_number == 1
    assert red.transcript[-1] == "I^2 = J*I^1"


def test_random_reduction_is_deterministic(fermat2):
    m = fermat2.maximal_ideal()
    a = hk.find_minimal_reduction(m, seed=3)
    b = hk.find_minimal_reduction(m, seed=3)
    assert [str(g) for g in a.reduction.generators] == [str(g) for g in b.reduction.generators]
    assert a.reduction_number == 2
    assert is_subset(a.reduction, m)


def test_reduction_failures(fermat2, plane7):
    with pytest.raises(hk.ReductionNotFound):
        hk.find_minimal_reduction(fermat2.maximal_ideal(), J=fermat2.ideal(["y"]))
    with pytest.raises(hk.ReductionNotFound):
        hk.find_minimal_reduction(fermat2.maximal_ideal(), seed=0, attempts=0)
    with pytest.raises(hk.ReductionNotFound):
        hk.find_minimal_reduction(plane7.maximal_ideal(), J=plane7.ideal(["x^2", "y"]), r_cap=3)


def test_stability(fermat2, plane7):
    J = fermat2.ideal(["y", "z"])
    assert hk.stability_check(J, J)
    assert hk.stability_check(ideal_power(plane7.maximal_ideal(), 2), plane7.ideal(["x^2", "y^2"]))
    assert not hk.stability_check(fermat2.maximal_ideal(), J)


def test_coefficients_of_parameter_ideal(fermat2):
    J = fermat2.ideal(["y", "z"])
    red = hk.find_minimal_reduction(J, J=J)
    for q in (2, 4):
        assert hk.frobenius_coefficients(J, red, q).as_tuple() == (q * q * 3, 0, 0)


@pytest.mark.parametrize("q", [2, 4])
def test_coefficients_match_frozen_oracle(fermat2, fermat_red, q):
    fc = hk.frobenius_coefficients(fermat2.maximal_ideal(), fermat_red, q)
    assert fc.as_tuple() == FERMAT_M_COEFFS[q]


def test_frozen_oracle_values_come_from_the_fit(fermat2):
    m = fermat2.maximal_ideal()
    for q in (2, 4):
        assert hk.frobenius_coefficients_by_fit(m, q, 8).as_tuple() == FERMAT_M_COEFFS[q]


def test_cm_cross_check_failure(fermat2):
    # a wrong "reduction" record whose colength is not e(m)
    m = fermat2.maximal_ideal()
    fake = hk.ReductionData(m, fermat2.ideal(["y^2", "z"]), 2)
    with pytest.raises(hk.CMCheckFailed):
        hk.frobenius_coefficients(m, fake, 2)


def test_regular_ring_ehk_is_flat(plane7):
    I = plane7.ideal(["x^3", "x*y^2", "y^3"])
    red = hk.find_minimal_reduction(I, seed=1)
    rep = hk.ehk_tables(I, red, e_max=1, n_max=3)
    base = hilbert_samuel_table(I, 3).values
    for n in range(1, 4):
        assert rep.normalized_ehk(7, n) == base[n]
    assert rep.normalized_ehk(7, 1) == colength(I)


def test_parameter_ideal_tables(fermat2):
    J = fermat2.ideal(["y", "z"])
    red = hk.find_minimal_reduction(J, J=J)
    rep = hk.ehk_tables(J, red, qs=[2, 4], n_max=4)
    for row in rep.rows:
        assert row.ordinary == [binom2(n) * row.ordinary[1] for n in range(5)]
        assert row.gaps == [0] * 5
        assert (row.e1, row.e2) == (0, 0)
    assert hk.theorem41_check(rep).ok


def test_fermat_tables_and_theorem(fermat2, fermat_red):
    rep = hk.ehk_tables(fermat2.maximal_ideal(), fermat_red, e_max=2, n_max=4)
    check = hk.theorem41_check(rep)
    assert check.ok
    for row in rep.rows:
        assert (row.e0, row.e1, row.e2) == FERMAT_M_COEFFS[row.q]
        assert all(v == 0 for v in row.hm_residuals.values())
        assert all(rep.normalized_rr(row.q, n) <= rep.normalized_ehk(row.q, n) for n in range(5))
    assert rep.L1(2) == Fraction(3, 2) and rep.L2(4) == Fraction(1, 4)
    assert rep.f_value(2, 1) == Fraction(8, 4) - 3 + Fraction(3, 2)
    assert rep.extrapolate("L1") == Fraction(3, 4)
    # negative control: a corrupted coefficient shows up as a residual
    bad = copy.deepcopy(rep)
    bad.rows[0].e1 += 1
    assert not hk.theorem41_check(bad).ok


def test_theorem_check_needs_long_tables(fermat2, fermat_red):
    rep = hk.ehk_tables(fermat2.maximal_ideal(), fermat_red, qs=[2], n_max=3)
    with pytest.raises(ValueError):
        hk.theorem41_check(rep)


def test_gap_at_q8(fermat2, fermat_red):
    gaps = hk.gap_table(fermat2.maximal_ideal(), 8, 2)
    assert gaps[2] > 0


def test_inequality(fermat2, fermat_red):
    J = fermat2.ideal(["y", "z"])
    red_j = hk.find_minimal_reduction(J, J=J)
    assert hk.estimates_inequality_check(J, red_j, 2, 1, 3).slack == {1: 0, 2: 0, 3: 0}
    rep = hk.estimates_inequality_check(fermat2.maximal_ideal(), fermat_red, 2, 2, 3)
    assert rep.ok
    with pytest.raises(ValueError, match="degenerate"):
        hk.estimates_inequality_check(fermat2.maximal_ideal(), fermat_red, 2, 2, 0)
    with pytest.raises(ValueError):
        hk.estimates_inequality_check(fermat2.maximal_ideal(), fermat_red, 2, 1, 2)


def test_search_regular_ring_has_no_witnesses(plane7):
    m = plane7.maximal_ideal()
    res = hk.star_refutation_search(m, m, [7], [1, 2])
    assert res.witnesses == [] and res.checked == [(7, 1), (7, 2)]


def test_search_runs_on_char7_fermat(fermat7):
    m = fermat7.maximal_ideal()
    res = hk.star_refutation_search(m, m, [7], [1])
    assert res.checked == [(7, 1)]
    for w in res.witnesses:
        assert not contains(ideal_power(frobenius_power(m, 7), 1), w.polynomial)


def test_search_aborts_on_degree_cap(fermat7):
    from hkpowers.ideals import QuotientRing
    R = QuotientRing(7, "xyz", ["x^3+y^3+z^3"], degree_cap=20)
    m = R.maximal_ideal()
    res = hk.star_refutation_search(m, m, [7, 49], [1])
    assert res.aborted is not None and "q=" in res.aborted


def test_frobenius_compatibility_of_closures(plane2):
    I = plane2.ideal(["x^4", "x^3*y", "x*y^3", "y^4"])
    for q in (1, 2):
        small = hk.ratliff_rush_closure(frobenius_power(I, q)).closure
        big = hk.ratliff_rush_closure(frobenius_power(I, 2 * q)).closure
        assert is_subset(frobenius_power(small, 2), big)


def test_regular_ring_strictness(plane2):
    I = plane2.ideal(["x^4", "x^3*y", "x*y^3", "y^4"])
    for q in (2, 4):
        assert colength(hk.ratliff_rush_closure(frobenius_power(I, q)).closure) < q * q * colength(I)


def test_e2_bounds_and_reduction_bound(fermat2, fermat_red):
    m = fermat2.maximal_ideal()
    e2 = fit_hilbert_polynomial(hilbert_samuel_table(m, 6)).e2
    J = fermat_red.reduction
    r = fermat_red.reduction_number
    for q in (2, 4):
        e2q = FERMAT_M_COEFFS[q][2]
        assert 0 <= e2q <= e2 * colength(frobenius_power(m, q))
        mq = frobenius_power(m, q)
        pw = power_sequence(mq, r + 1)
        from hkpowers.ideals import ideal_product
        assert ideal_equals(pw[r + 1], ideal_product(frobenius_power(J, q), pw[r]))


def test_e2_zero_case_in_regular_ring(plane7):
    # integrally closed ideals in a regular ring have e2 = 0, and so do their Frobenius powers
    I = plane7.ideal(["x^2", "x*y", "y^2"])
    assert fit_hilbert_polynomial(hilbert_samuel_table(I, 5)).e2 == 0
    red = hk.find_minimal_reduction(I, seed=0)
    rep = hk.ehk_tables(I, red, e_max=1, n_max=4)
    row = rep.rows[0]
    assert row.e2 == 0
    e = rep.multiplicity
    for n in range(1, 5):
        assert rep.normalized_ehk(7, n) == e * binom2(n) - rep.L1(7) * n


def test_report_json_roundtrip(fermat2, fermat_red):
    import json
    rep = hk.ehk_tables(fermat2.maximal_ideal(), fermat_red, qs=[2], n_max=2)
    data = json.loads(json.dumps(rep.to_json(), sort_keys=True))
    assert data["rows"][0]["coefficients"] == [12, 6, 1]
    assert data["rows"][0]["normalized_ehk"][2] == "25/4"


def test_parallel_matches_serial(fermat2, fermat_red):
    a = hk.ehk_tables(fermat2.maximal_ideal(), fermat_red, qs=[2, 4], n_max=3, jobs=2)
    b = hk.ehk_tables(fermat2.maximal_ideal(), fermat_red, qs=[2, 4], n_max=3, jobs=1)
    assert a.to_json() == b.to_json()
