import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import as_term_set, grid_colength, sympy_groebner
from hkpowers.algebra import PolynomialRing
from hkpowers.groebner import (
    DegreeCapExceeded,
    buchberger,
    is_groebner,
    is_reduced,
    is_zero_dimensional,
    krull_dimension,
    normal_form,
    s_polynomial,
    standard_monomial_count,
    standard_monomials,
)


def random_poly(R, rng, terms=3, deg=3):
    f = R.zero()
    for _ in range(terms):
        e = [rng.randrange(deg + 1) for _ in R.variables]
        f = f + R.term(rng.randrange(1, R.p), e)
    return f


@pytest.mark.parametrize("seed", range(12))
def test_matches_sympy_on_random_ideals(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3, 7, 101])
    R = PolynomialRing(p, "xyz")
    gens = [random_poly(R, rng) for _ in range(3)]
    G = buchberger(gens, ring=R)
    mine = {as_term_set(g) for g in G.generators}
    assert mine == sympy_groebner(gens, R.variables, p)
    assert is_groebner(G) and is_reduced(G)


def test_unit_and_empty():
    R = PolynomialRing(5, "xy")
    G = buchberger([R.parse("x*y - 1"), R.parse("x")], ring=R)
    assert G.is_unit()
    assert standard_monomial_count(G) == 0
    assert krull_dimension(G) == -1
    E = buchberger([], ring=R)
    assert krull_dimension(E) == 2


def test_normal_form_and_spoly():
    R = PolynomialRing(7, "xy")
    G = buchberger([R.parse("x^2 - y"), R.parse("x*y - 1")], ring=R)
    for a in G.generators:
        for b in G.generators:
            assert not normal_form(s_polynomial(a, b), G)
    assert normal_form(R.parse("x^2"), G) == normal_form(R.parse("y"), G)


def test_colength_of_monomial_ideal_matches_grid():
    R = PolynomialRing(2, "xy")
    G = buchberger([R.parse(s) for s in ["x^4", "x^3*y", "x*y^3", "y^4"]], ring=R)
    assert standard_monomial_count(G) == 11 == grid_colength([(4, 0), (3, 1), (1, 3), (0, 4)], 2, 8)
    assert len(standard_monomials(G)) == 11


def test_fermat_frobenius_square_is_grid():
    R = PolynomialRing(2, "xyz")
    G = buchberger([R.parse(s) for s in ["x^3+y^3+z^3", "x^2", "y^2", "z^2"]], ring=R)
    assert standard_monomial_count(G) == 8


def test_dimension():
    R = PolynomialRing(2, "xyz")
    assert krull_dimension(buchberger([R.parse("x^3+y^3+z^3")], ring=R)) == 2
    G = buchberger([R.parse("x")], ring=R)
    assert not is_zero_dimensional(G)
    assert standard_monomial_count(G) == float("inf")


def test_degree_cap():
    R = PolynomialRing(7, "xyz")
    gens = [R.parse("x^5*y - z^6"), R.parse("y^5*z - x^6"), R.parse("z^5*x - y^6")]
    with pytest.raises(DegreeCapExceeded):
        buchberger(gens, ring=R, degree_cap=7)


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False))
def test_reduced_basis_is_canonical_under_shuffles(rnd):
    R = PolynomialRing(3, "xy")
    gens = [random_poly(R, rnd, terms=2, deg=3) for _ in range(3)]
    G1 = buchberger(gens, ring=R)
    shuffled = gens[:]
    rnd.shuffle(shuffled)
    # add a redundant combination as well
    shuffled.append(gens[0] * R.gen(0) + gens[1])
    G2 = buchberger(shuffled, ring=R)
    assert G1 == G2
