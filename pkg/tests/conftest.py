import itertools

import pytest
import sympy

from hkpowers.ideals import QuotientRing


@pytest.fixture(scope="session")
def fermat2():
    return QuotientRing(2, "xyz", ["x^3+y^3+z^3"])


@pytest.fixture(scope="session")
def fermat7():
    return QuotientRing(7, "xyz", ["x^3+y^3+z^3"])


@pytest.fixture(scope="session")
def plane2():
    return QuotientRing(2, "xy")


@pytest.fixture(scope="session")
def plane7():
    return QuotientRing(7, "xy")


def sympy_groebner(polys, variables, p):
    """Reduced grevlex basis from sympy, as a set of monic polynomial strings."""
    syms = sympy.symbols(" ".join(variables))
    exprs = [sympy.sympify(str(f).replace("^", "**")) for f in polys]
    G = sympy.groebner(exprs, *syms, modulus=p, order="grevlex")
    out = set()
    for g in G.exprs:
        poly = sympy.Poly(g, *syms, modulus=p)
        lc = int(poly.LC(order="grevlex")) % p
        inv = pow(lc, -1, p)
        out.add(frozenset((m, int(c) * inv % p) for m, c in poly.terms()))
    return out


def as_term_set(f):
    return frozenset((m.exponents, c) for c, m in f.terms())


def grid_colength(monomials, nvars, bound=64):
    """Count exponent vectors not divisible by any of the given monomials (brute force)."""
    count = 0
    for e in itertools.product(range(bound), repeat=nvars):
        if not any(all(a >= b for a, b in zip(e, m)) for m in monomials):
            count += 1
    return count


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
