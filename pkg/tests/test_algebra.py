import pickle

import pytest
from hypothesis import given, settings, strategies as st

from hkpowers.algebra import (
    MAX_DEGREE,
    AlgebraError,
    FieldElement,
    Monomial,
    MonomialOrder,
    PolynomialRing,
    PolynomialSyntaxError,
    UnknownVariableError,
    field_inverse,
    is_power_of,
    is_prime,
    monomial_compare,
    pack,
    unpack,
)


def test_is_prime_small_and_large():
    primes = [n for n in range(60) if is_prime(n)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert is_prime(2147483647)
    assert not is_prime(2147483647 * 3)


def test_field_arithmetic():
    a = FieldElement(3, 7)
    b = FieldElement(5, 7)
    assert int(a + b) == 1
    assert int(a * b) == 1
    assert int(a - b) == 5
    assert int(a / b) == 2
    assert field_inverse(3, 7) == 5
    with pytest.raises(ZeroDivisionError):
        field_inverse(0, 7)


def test_pack_roundtrip_and_order():
    e = (3, 0, 7)
    assert unpack(pack(e), 3) == e
    grevlex = MonomialOrder("grevlex")
    lex = MonomialOrder("lex")
    # x*z^2 vs y^3 (degree 3): grevlex prefers y^3, lex prefers x*z^2
    a, b = Monomial.of((1, 0, 2)), Monomial.of((0, 3, 0))
    assert monomial_compare(a, b, grevlex) == -1
    assert monomial_compare(a, b, lex) == 1
    assert monomial_compare(a, a, lex) == 0


def test_block_order_eliminates_first_block():
    R = PolynomialRing(7, ["t", "x", "y"], MonomialOrder("block", 1))
    f = R.parse("t + x^5*y^5")
    assert R.exponents(f.leading_monomial()) == (1, 0, 0)


def test_parse_and_print():
    R = PolynomialRing(5, "xyz")
    f = R.parse("3x^2y - z + 4")
    assert str(f) == "3*x^2*y+4*z+4"
    assert R.parse(str(f)) == f
    assert R.parse("(x+y)^5") == R.parse("x^5+y^5")
    assert R.parse("2*(x - x)") == R.zero()


@pytest.mark.parametrize("text", ["x^", "x +* y", "(x", "x^-1"])
def test_parse_errors(text):
    R = PolynomialRing(5, "xy")
    with pytest.raises(PolynomialSyntaxError):
        R.parse(text)


def test_unknown_variable():
    R = PolynomialRing(5, "xy")
    with pytest.raises(UnknownVariableError):
        R.parse("x*w")


def test_bad_ring_and_degree_overflow():
    with pytest.raises(AlgebraError):
        PolynomialRing(6, "xy")
    R = PolynomialRing(2, "x")
    big = R.parse(f"x^{MAX_DEGREE}")
    with pytest.raises(OverflowError):
        big * R.gen(0)


def test_frobenius_and_power_of():
    R = PolynomialRing(3, "xy")
    f = R.parse("x + 2y + 1")
    assert f.frobenius(9) == f ** 9
    assert is_power_of(27, 3) and is_power_of(1, 3) and not is_power_of(6, 3)


def test_pickle_roundtrip():
    R = PolynomialRing(7, "xyz")
    f = R.parse("x^2 + 3y*z")
    g = pickle.loads(pickle.dumps(f))
    assert g == f and g.ring == R


coeffs = st.integers(min_value=0, max_value=6)
small_poly = st.lists(st.tuples(coeffs, st.tuples(*[st.integers(0, 3)] * 3)), max_size=5)


def _build(R, data):
    return R.from_terms([(c, e) for c, e in data])


@settings(max_examples=60, deadline=None)
@given(small_poly, small_poly, small_poly)
def test_ring_axioms(a, b, c):
    R = PolynomialRing(7, "xyz")
    f, g, h = _build(R, a), _build(R, b), _build(R, c)
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f
    assert f - f == R.zero()


@settings(max_examples=40, deadline=None)
@given(small_poly, small_poly)
def test_frobenius_is_additive(a, b):
    R = PolynomialRing(7, "xyz")
    f, g = _build(R, a), _build(R, b)
    assert (f + g).frobenius(7) == f.frobenius(7) + g.frobenius(7)
    assert (f + g) ** 7 == (f + g).frobenius(7)
