"""Ideals of R = F_p[x_1..x_n]/Q, handled through preimages containing Q.

An :class:`Ideal` keeps its generators (preimages in the polynomial ring)
and lazily computes the reduced Groebner basis of ``generators + Q``.  The
cache is filled once (compute, then publish) and never mutated afterwards.

Colon ideals of Artinian quotients are computed by linear algebra on the
standard-monomial basis of ``R/I``: ``(I : J)/I`` is the common kernel of
multiplication by the generators of ``J``.  The kernel is turned back into a
reduced Groebner basis directly (pivots become new leading monomials).
The elimination route (intersection with a fresh variable, exact division)
handles everything else and serves as an independent cross-check.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .algebra import (
    FIELD_BITS,
    AlgebraError,
    MonomialOrder,
    Polynomial,
    PolynomialRing,
    RingMismatchError,
    is_power_of,
    pack,
)
from .groebner import (
    DEFAULT_DEGREE_CAP,
    GroebnerBasis,
    _reduce,
    buchberger,
    is_zero_dimensional,
    krull_dimension,
    reducers_of,
    standard_monomial_count,
    standard_monomials,
)

log = logging.getLogger(__name__)


class NotArtinianError(ValueError):
    pass


class SupportError(ValueError):
    """R/I has points of support away from the origin."""


class QuotientRing:
    """F_p[x_1..x_n]/Q with the maximal ideal m = (x_1..x_n)."""

    def __init__(self, characteristic: int, variables: Sequence[str],
                 relations: Iterable[Polynomial | str] = (), *,
                 degree_cap: int = DEFAULT_DEGREE_CAP):
        self.poly_ring = PolynomialRing(characteristic, variables, "grevlex")
        self.degree_cap = degree_cap
        rels = [self.poly_ring.parse(r) if isinstance(r, str) else r for r in relations]
        self.relations = tuple(r for r in rels if r)
        self.relation_basis = buchberger(self.relations, ring=self.poly_ring,
                                         degree_cap=degree_cap)
        self.dimension = krull_dimension(self.relation_basis)
        self.homogeneous = all(r.is_homogeneous() for r in self.relations)

    @property
    def p(self) -> int:
        return self.poly_ring.p

    @property
    def variables(self) -> tuple[str, ...]:
        return self.poly_ring.variables

    def __repr__(self):
        rels = ", ".join(str(r) for r in self.relations) or "0"
        return f"QuotientRing(F_{self.p}[{', '.join(self.variables)}]/({rels}))"

    def __eq__(self, other):
        return (isinstance(other, QuotientRing) and self.poly_ring == other.poly_ring
                and self.relation_basis == other.relation_basis)

    def __hash__(self):
        return hash((self.poly_ring, self.relation_basis))

    def __getstate__(self):
        return {"p": self.p, "variables": self.variables,
                "relations": [r.term_dict() for r in self.relations],
                "degree_cap": self.degree_cap}

    def __setstate__(self, state):
        ring = PolynomialRing(state["p"], state["variables"], "grevlex")
        rels = [Polynomial(ring, t) for t in state["relations"]]
        self.__init__(state["p"], state["variables"], rels, degree_cap=state["degree_cap"])

    def parse(self, text: str) -> Polynomial:
        return self.poly_ring.parse(text)

    def ideal(self, gens: Iterable[Polynomial | str]) -> "Ideal":
        polys = [self.parse(g) if isinstance(g, str) else g for g in gens]
        for g in polys:
            if g.ring != self.poly_ring:
                raise RingMismatchError("generator from a different polynomial ring")
        return Ideal(self, polys)

    def maximal_ideal(self) -> "Ideal":
        return Ideal(self, self.poly_ring.gens(), _local=True)

    def unit_ideal(self) -> "Ideal":
        return Ideal(self, [self.poly_ring.one()], _local=True)

    def zero_ideal(self) -> "Ideal":
        return Ideal(self, [])

    def reduce(self, f: Polynomial) -> Polynomial:
        return Polynomial(self.poly_ring, _reduce(self.poly_ring, f._t,
                                                  reducers_of(self.relation_basis)))

    def require_dimension(self, d: int = 2) -> None:
        if self.dimension != d:
            raise ValueError(f"this computation needs a {d}-dimensional ring; "
                             f"R has dimension {self.dimension}")


class Ideal:
    """Ideal of a QuotientRing, given by preimage generators."""

    def __init__(self, ring: QuotientRing, generators: Iterable[Polynomial], *,
                 _gb: GroebnerBasis | None = None, _power: tuple["Ideal", int] | None = None,
                 _local: bool | None = None):
        self.ring = ring
        self.generators = tuple(g for g in generators if g)
        self._gb = _gb
        self._reducers = None
        self._power = _power
        # True once R/I is known to be supported at the origin only
        self._local = _local

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators[:6])
        more = ", ..." if len(self.generators) > 6 else ""
        return f"Ideal({gens}{more})"

    def __getstate__(self):
        return {"ring": self.ring, "gens": [g.term_dict() for g in self.generators],
                "gb": None if self._gb is None else [g.term_dict() for g in self._gb.generators],
                "power": self._power, "local": self._local}

    def __setstate__(self, state):
        ring = state["ring"]
        R = ring.poly_ring
        gb = None
        if state["gb"] is not None:
            gb = GroebnerBasis(R, tuple(Polynomial(R, t) for t in state["gb"]), True)
        self.__init__(ring, [Polynomial(R, t) for t in state["gens"]], _gb=gb,
                      _power=state["power"], _local=state["local"])

    # cached Groebner data --------------------------------------------------------

    def groebner(self) -> GroebnerBasis:
        gb = self._gb
        if gb is None:
            gb = buchberger(list(self.generators) + list(self.ring.relations),
                            ring=self.ring.poly_ring, degree_cap=self.ring.degree_cap)
            self._gb = gb
        return gb

    def reducers(self):
        reds = self._reducers
        if reds is None:
            reds = reducers_of(self.groebner())
            self._reducers = reds
        return reds

    def normal_form(self, f: Polynomial) -> Polynomial:
        R = self.ring.poly_ring
        return Polynomial(R, _reduce(R, f._t, self.reducers()))

    def is_homogeneous(self) -> bool:
        return self.ring.homogeneous and all(g.is_homogeneous() for g in self.generators)

    def is_unit(self) -> bool:
        return self.groebner().is_unit()

    def is_zero_dimensional(self) -> bool:
        return is_zero_dimensional(self.groebner())

    # operator sugar ----------------------------------------------------------------

    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_product(self, other)

    def __pow__(self, n: int) -> "Ideal":
        return ideal_power(self, n)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equals(self, other)

    def __hash__(self):
        return hash(self.groebner())

    def __le__(self, other: "Ideal") -> bool:
        return is_subset(self, other)

    def __contains__(self, f: Polynomial) -> bool:
        return contains(self, f)

    def frobenius(self, q: int) -> "Ideal":
        return frobenius_power(self, q)

    def colength(self) -> int:
        return colength(self)


def _same_ring(I: Ideal, J: Ideal) -> None:
    if I.ring is not J.ring and I.ring != J.ring:
        raise RingMismatchError("ideals live in different rings")


def _both_local(I: Ideal, J: Ideal) -> bool | None:
    return True if (I._local and J._local) else None


def interreduce(gens: Sequence[Polynomial]) -> list[Polynomial]:
    """Mutually reduce a generator list in the polynomial ring (drops redundant ones)."""
    polys = []
    seen = set()
    for g in gens:
        if g:
            g = g.monic()
            if g not in seen:
                seen.add(g)
                polys.append(g)
    if len(polys) <= 1:
        return polys
    ring = polys[0].ring
    if all(len(g) == 1 for g in polys):
        lms = sorted((g.leading_monomial() for g in polys), key=ring.degree)
        kept: list[int] = []
        for m in lms:
            if not any(ring.divides(k, m) for k in kept):
                kept.append(m)
        return [Polynomial(ring, {m: 1}) for m in kept]
    from .groebner import _Reducer
    changed = True
    while changed:
        changed = False
        for i in range(len(polys)):
            others = [_Reducer(g) for j, g in enumerate(polys) if j != i and g]
            r = Polynomial(ring, _reduce(ring, polys[i]._t, others)) if others else polys[i]
            if r != polys[i]:
                changed = True
                polys[i] = r.monic() if r else r
        polys = [g for g in polys if g]
    return polys


# ideal algebra ----------------------------------------------------------------------


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    gens = interreduce(I.generators + J.generators)
    local = True if (I._local or J._local) else None
    return Ideal(I.ring, gens, _local=local)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    gens = [f * g for f in I.generators for g in J.generators]
    return Ideal(I.ring, interreduce(gens), _local=_both_local(I, J))


def ideal_power(I: Ideal, n: int) -> Ideal:
    """I^n by iterated products; I^n = R for n <= 0."""
    if n <= 0:
        return I.ring.unit_ideal()
    if n == 1:
        return I
    base, k = I._power if I._power is not None else (I, 1)
    gens = list(I.generators)
    for _ in range(n - 1):
        gens = interreduce([f * g for f in gens for g in I.generators])
    return Ideal(I.ring, gens, _power=(base, k * n), _local=I._local)


def iter_powers(I: Ideal):
    """Yield I, I^2, I^3, ... each built from the previous one."""
    yield I
    base, k = I._power if I._power is not None else (I, 1)
    gens = list(I.generators)
    n = 1
    while True:
        n += 1
        gens = interreduce([f * g for f in gens for g in I.generators])
        yield Ideal(I.ring, gens, _power=(base, k * n), _local=I._local)


def power_sequence(I: Ideal, n_max: int) -> list[Ideal]:
    """[R, I, I^2, ..., I^n_max]."""
    out = [I.ring.unit_ideal()]
    powers = iter_powers(I)
    for _ in range(n_max):
        out.append(next(powers))
    return out


def frobenius_power(I: Ideal, q: int) -> Ideal:
    """I^[q], generated by the q-th powers of the generators."""
    p = I.ring.p
    if not is_power_of(q, p):
        raise ValueError(f"Frobenius exponent {q} is not a power of the characteristic {p}")
    return Ideal(I.ring, [g.frobenius(q) for g in I.generators], _local=I._local)


def contains(I: Ideal, f: Polynomial | str) -> bool:
    if isinstance(f, str):
        f = I.ring.parse(f)
    return not I.normal_form(f)


def is_subset(I: Ideal, J: Ideal) -> bool:
    _same_ring(I, J)
    return all(contains(J, g) for g in I.generators)


def ideal_equals(I: Ideal, J: Ideal) -> bool:
    _same_ring(I, J)
    return I.groebner() == J.groebner()


def colength(I: Ideal) -> int:
    """Length of R/I, checked to be the local length at the origin."""
    G = I.groebner()
    n = standard_monomial_count(G)
    if n == float("inf"):
        raise NotArtinianError(f"R/I is not Artinian for {I!r}")
    if not I._local and not I.is_homogeneous():
        _check_support(I, n)
        I._local = True
    return n


def _check_support(I: Ideal, length: int) -> None:
    # supported only at the origin  <=>  m^length ⊆ I  <=>  x_i^length ∈ I for every i
    R = I.ring.poly_ring
    for i in range(R.nvars):
        if I.normal_form(_power_mod(I, R.gen(i), length)):
            raise SupportError(f"R/I is not supported at the origin only ({R.variables[i]}"
                               f"^{length} not in I); its length is not the local length")


def _power_mod(I: Ideal, f: Polynomial, e: int) -> Polynomial:
    result = f.ring.one()
    base = I.normal_form(f)
    while e and base:
        if e & 1:
            result = I.normal_form(result * base)
        e >>= 1
        if e:
            base = I.normal_form(base * base)
    return result if not e else f.ring.zero()


# intersection and colon --------------------------------------------------------------


def _with_t(R: PolynomialRing, T: PolynomialRing, f: Polynomial, t_power: int) -> Polynomial:
    shift = t_power << (FIELD_BITS * R.nvars)
    return Polynomial(T, {m + shift: c for m, c in f._t.items()})


def _intersect_preimages(R: PolynomialRing, A: Sequence[Polynomial], B: Sequence[Polynomial],
                         degree_cap: int) -> list[Polynomial]:
    """Generators of (A) ∩ (B) in the polynomial ring, eliminating t from tA + (1-t)B."""
    T = PolynomialRing(R.p, ("_t",) + R.variables, MonomialOrder("block", 1))
    gens = [_with_t(R, T, f, 1) for f in A]
    gens += [_with_t(R, T, f, 0) - _with_t(R, T, f, 1) for f in B]
    G = buchberger(gens, ring=T, degree_cap=degree_cap)
    tmask = ((1 << FIELD_BITS) - 1) << (FIELD_BITS * R.nvars)
    return [Polynomial(R, dict(g._t)) for g in G.generators
            if all(m & tmask == 0 for m in g._t)]


def ideal_intersection(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J, computed on preimages (both contain the relations)."""
    _same_ring(I, J)
    ring = I.ring
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    rels = list(ring.relations)
    out = _intersect_preimages(ring.poly_ring, list(I.generators) + rels,
                               list(J.generators) + rels, ring.degree_cap)
    return Ideal(ring, out, _local=True if (I._local or J._local) else None)


def exact_divide(h: Polynomial, f: Polynomial) -> Polynomial:
    """h / f in the polynomial ring; raises if f does not divide h."""
    R = h.ring
    from .groebner import _Reducer
    red = _Reducer(f)
    lc_inv = pow(f.leading_coefficient(), -1, R.p)
    quot: dict[int, int] = {}
    rem = dict(h._t)
    key = R.key
    tail = [(m, c) for m, c in f.sorted_items()[1:]]
    while rem:
        m = max(rem, key=key)
        if not R.divides(red.lm, m):
            raise AlgebraError("division is not exact")
        c = rem.pop(m) * lc_inv % R.p
        shift = m - red.lm
        quot[shift] = (quot.get(shift, 0) + c) % R.p
        for tm, tc in tail:
            nm = tm + shift
            v = (rem.get(nm, 0) - c * tc) % R.p
            if v:
                rem[nm] = v
            else:
                rem.pop(nm, None)
    return Polynomial(R, {m: c for m, c in quot.items() if c})


def _colon_element_elimination(I: Ideal, f: Polynomial) -> Ideal:
    ring = I.ring
    if not I.normal_form(f):
        return ring.unit_ideal()
    # (I' : f) = (I' ∩ (f)) / f in the polynomial ring, with I' ⊇ relations
    inter = _intersect_preimages(ring.poly_ring, I.groebner().generators, [f], ring.degree_cap)
    return Ideal(ring, [exact_divide(h, f) for h in inter])


def _colon_elimination(I: Ideal, fs: Sequence[Polynomial]) -> Ideal:
    result = None
    for f in fs:
        K = _colon_element_elimination(I, f)
        result = K if result is None else ideal_intersection(result, K)
    if result is None:
        return I.ring.unit_ideal()
    return result


class _QuotientBasis:
    """Standard-monomial basis of an Artinian R/I with memoised border normal forms."""

    def __init__(self, I: Ideal):
        self.ideal = I
        self.R = I.ring.poly_ring
        self.basis = standard_monomials(I.groebner())
        self.index = {m: i for i, m in enumerate(self.basis)}
        self._border: dict[int, dict[int, int]] = {}
        self.var_shift = [pack([1 if j == i else 0 for j in range(self.R.nvars)])
                          for i in range(self.R.nvars)]

    def nf_monomial(self, m: int) -> dict[int, int]:
        if m in self.index:
            return {m: 1}
        v = self._border.get(m)
        if v is None:
            v = _reduce(self.R, {m: 1}, self.ideal.reducers())
            self._border[m] = v
        return v

    def times_var(self, vec: dict[int, int], i: int) -> dict[int, int]:
        p = self.R.p
        s = self.var_shift[i]
        out: dict[int, int] = {}
        get = out.get
        index = self.index
        for m, c in vec.items():
            nm = m + s
            if nm in index:
                out[nm] = (get(nm, 0) + c) % p
            else:
                for bm, bc in self.nf_monomial(nm).items():
                    out[bm] = (get(bm, 0) + c * bc) % p
        return {m: c for m, c in out.items() if c}

    def products(self, f: Polynomial) -> dict[int, dict[int, int]]:
        """NF(b*f) for every standard monomial b, built degree by degree."""
        R = self.R
        nf_f = _reduce(R, f._t, self.ideal.reducers())
        out: dict[int, dict[int, int]] = {}
        n = R.nvars
        for b in sorted(self.basis, key=R.degree):
            if b == 0:
                out[b] = nf_f
                continue
            exps = R.exponents(b)
            i = max(j for j in range(n) if exps[j])
            out[b] = self.times_var(out[b - self.var_shift[i]], i)
        return out


def _colon_linear(I: Ideal, fs: Sequence[Polynomial]) -> Ideal:
    ring = I.ring
    R = ring.poly_ring
    p = R.p
    G = I.groebner()
    if G.is_unit():
        return ring.unit_ideal()
    qb = _QuotientBasis(I)
    prods = [qb.products(f) for f in fs]
    homogeneous = I.is_homogeneous() and all(f.is_homogeneous() for f in fs)
    groups: dict[int, list[int]] = defaultdict(list)
    for b in qb.basis:
        groups[R.degree(b) if homogeneous else 0].append(b)
    key = R.key
    kernel_rows: list[dict[int, int]] = []
    for _deg, rows in sorted(groups.items()):
        cols: dict[tuple[int, int], int] = {}
        for b in rows:
            for j, pr in enumerate(prods):
                for m in pr[b]:
                    cols.setdefault((j, m), len(cols))
        M = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for r, b in enumerate(rows):
            for j, pr in enumerate(prods):
                for m, c in pr[b].items():
                    M[r, cols[(j, m)]] = c
        K = linalg.left_kernel(M, p) if cols else np.eye(len(rows), dtype=np.int64)
        if K.shape[0] == 0:
            continue
        # echelonise with columns in descending monomial order: pivots are leading monomials
        order = sorted(range(len(rows)), key=lambda r: key(rows[r]), reverse=True)
        E, piv = linalg.rref(K[:, order], p)
        for r in range(len(piv)):
            vec = {rows[order[c]]: int(E[r, c]) for c in np.nonzero(E[r])[0]}
            kernel_rows.append(vec)
    return _extend_basis(I, kernel_rows)


def _extend_basis(I: Ideal, rows: list[dict[int, int]]) -> Ideal:
    """Reduced Groebner basis of I + span(rows), rows in reduced echelon form over R/I."""
    ring = I.ring
    R = ring.poly_ring
    p = R.p
    key = R.key
    if not rows:
        return Ideal(ring, I.groebner().generators, _gb=I.groebner(), _local=I._local)
    pivot_rows = {max(v, key=key): v for v in rows}
    if 0 in pivot_rows:
        return ring.unit_ideal()
    candidates = [(m, "pivot") for m in pivot_rows] + [(g.leading_monomial(), g)
                                                         for g in I.groebner().generators]
    lms = [m for m, _ in candidates]
    out = []
    for m, src in candidates:
        if any(o != m and R.divides(o, m) for o in lms):
            continue
        if src == "pivot":
            out.append(Polynomial(R, dict(pivot_rows[m])))
            continue
        terms = dict(src._t)
        for pm in [t for t in terms if t in pivot_rows and t != m]:
            c = terms.get(pm, 0)
            if not c:
                continue
            for rm, rc in pivot_rows[pm].items():
                v = (terms.get(rm, 0) - c * rc) % p
                if v:
                    terms[rm] = v
                else:
                    terms.pop(rm, None)
        out.append(Polynomial(R, terms))
    out.sort(key=lambda g: key(g.leading_monomial()))
    gb = GroebnerBasis(R, tuple(out), True)
    return Ideal(ring, out, _gb=gb, _local=True if I._local else None)


def ideal_colon(I: Ideal, J: Ideal, method: str = "auto") -> Ideal:
    """(I :_R J) = {r in R : rJ ⊆ I}.

    ``method`` is "linear" (Artinian quotients), "elimination", or "auto".
    """
    _same_ring(I, J)
    if method not in ("auto", "linear", "elimination"):
        raise ValueError(f"unknown colon method {method!r}")
    if J._power is not None:
        base, k = J._power
        if len(base.generators) < len(J.generators):
            result = I
            for _ in range(k):
                result = ideal_colon(result, base, method)
                if result.is_unit():
                    break
            return result
    fs = [f for f in J.generators if f]
    if not fs:
        return I.ring.unit_ideal()
    if method == "elimination" or (method == "auto" and not I.is_zero_dimensional()):
        result = _colon_elimination(I, fs)
    else:
        if not I.is_zero_dimensional():
            raise NotArtinianError("linear colon needs an Artinian quotient")
        result = _colon_linear(I, fs)
    if I._local:
        result._local = True
    return result
