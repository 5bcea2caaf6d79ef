"""Buchberger's algorithm over F_p with sugar selection and Gebauer-Moeller pruning."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .algebra import MonomialOrder, Polynomial, PolynomialRing, RingMismatchError

DEFAULT_DEGREE_CAP = 4096


class DegreeCapExceeded(RuntimeError):
    """An intermediate polynomial exceeded the configured degree cap."""

    def __init__(self, degree: int, cap: int):
        super().__init__(f"intermediate degree {degree} exceeds cap {cap}")
        self.degree = degree
        self.cap = cap


@dataclass(frozen=True, eq=False)
class GroebnerBasis:
    ring: PolynomialRing
    generators: tuple[Polynomial, ...]
    reduced: bool = True

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    def leading_monomials(self) -> list[int]:
        return [g.leading_monomial() for g in self.generators]

    def is_unit(self) -> bool:
        return any(g.leading_monomial() == 0 for g in self.generators)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __eq__(self, other):
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return self.ring == other.ring and set(self.generators) == set(other.generators)

    def __hash__(self):
        return hash(frozenset(self.generators))


class _Reducer:
    """Monic polynomial split into leading monomial and keyed tail."""

    __slots__ = ("lm", "lmkey", "tail", "poly", "sugar")

    def __init__(self, poly: Polynomial, sugar: int | None = None):
        ring = poly.ring
        items = poly.sorted_items()
        self.poly = poly
        self.lm = items[0][0]
        self.lmkey = ring.key(self.lm)
        key = ring.key
        self.tail = [(m, key(m), c) for m, c in items[1:]]
        self.sugar = poly.total_degree() if sugar is None else sugar


def _reduce(ring: PolynomialRing, f: dict[int, int], reducers: Sequence[_Reducer],
            skip: int | None = None) -> dict[int, int]:
    """Full normal form of f (a term dict) by reducers; returns a new term dict.

    ``skip`` excludes one reducer index (used for tail reduction).
    """
    if not f or not reducers:
        return dict(f)
    p = ring.p
    guard = ring.guard
    key = ring.key
    work = dict(f)
    heap = [(-key(m), m) for m in work]
    heapq.heapify(heap)
    rem: dict[int, int] = {}
    lms = [(r.lm, r) for i, r in enumerate(reducers) if i != skip]
    push = heapq.heappush
    pop = heapq.heappop
    while heap:
        negk, m = pop(heap)
        c = work.pop(m, 0)
        if not c:
            continue
        mg = m | guard
        for lm, red in lms:
            if (mg - lm) & guard == guard:
                break
        else:
            rem[m] = c
            continue
        shift = m - lm
        kshift = -negk - red.lmkey
        get = work.get
        for tm, tk, tc in red.tail:
            nm = tm + shift
            old = get(nm)
            if old is None:
                work[nm] = (-c * tc) % p
                push(heap, (-(tk + kshift), nm))
            else:
                work[nm] = (old - c * tc) % p
    return rem


def _monic_terms(ring: PolynomialRing, terms: dict[int, int]) -> Polynomial:
    f = Polynomial(ring, terms)
    return f.monic()


def _coerce(gens: Iterable[Polynomial], ring: PolynomialRing | None,
            order: MonomialOrder | str | None) -> tuple[PolynomialRing, list[Polynomial]]:
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ValueError("ring required for an empty generator list")
        ring = gens[0].ring
    for g in gens:
        if (g.ring.p, g.ring.variables) != (ring.p, ring.variables):
            raise RingMismatchError("generators from different rings")
    if order is not None:
        order = order if isinstance(order, MonomialOrder) else MonomialOrder(order)
        if order != ring.order:
            ring = ring.with_order(order)
    return ring, [g if g.ring == ring else Polynomial(ring, g.term_dict()) for g in gens]


def buchberger(gens: Iterable[Polynomial], order: MonomialOrder | str | None = None, *,
               ring: PolynomialRing | None = None,
               degree_cap: int = DEFAULT_DEGREE_CAP) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    ring, polys = _coerce(gens, ring, order)
    polys = [f for f in polys if f]
    if not polys:
        return GroebnerBasis(ring, ())
    key = ring.key
    degree = ring.degree

    basis: list[_Reducer] = []
    active: list[int] = []
    pairs: dict[tuple[int, int], tuple[int, int, int]] = {}
    heap: list[tuple[int, int, int, int]] = []

    def lcm_of(i: int, j: int) -> int:
        return ring.lcm(basis[i].lm, basis[j].lm)

    def coprime(a: int, b: int) -> bool:
        return ring.lcm(a, b) == a + b

    def update(h: int) -> None:
        nonlocal active
        lm_h = basis[h].lm
        cands = [(g, lcm_of(h, g)) for g in active]
        kept: list[tuple[int, int]] = []
        for idx, (g1, l1) in enumerate(cands):
            if coprime(lm_h, basis[g1].lm):
                kept.append((g1, l1))
                continue
            redundant = False
            for g2, l2 in cands[idx + 1:]:
                if ring.divides(l2, l1):
                    redundant = True
                    break
            if not redundant:
                for g2, l2 in kept:
                    if ring.divides(l2, l1):
                        redundant = True
                        break
            if not redundant:
                kept.append((g1, l1))
        # Buchberger chain criterion on old pairs
        for (i, j), (_s, _k, l) in list(pairs.items()):
            if (ring.divides(lm_h, l) and lcm_of(i, h) != l and lcm_of(j, h) != l):
                del pairs[(i, j)]
        for g, l in kept:
            if coprime(lm_h, basis[g].lm):
                continue
            bh, bg = basis[h], basis[g]
            dl = degree(l)
            sugar = max(bh.sugar + dl - degree(bh.lm), bg.sugar + dl - degree(bg.lm))
            pair = (g, h)
            kl = key(l)
            pairs[pair] = (sugar, kl, l)
            heapq.heappush(heap, (sugar, kl, g, h))
        active = [g for g in active if not ring.divides(lm_h, basis[g].lm)] + [h]

    def add(terms: dict[int, int], sugar: int) -> None:
        poly = _monic_terms(ring, terms)
        if poly.total_degree() > degree_cap:
            raise DegreeCapExceeded(poly.total_degree(), degree_cap)
        basis.append(_Reducer(poly, sugar))
        update(len(basis) - 1)

    # seed with the inputs, smallest leading monomial first
    for f in sorted(polys, key=lambda f: key(f.leading_monomial())):
        if f.total_degree() > degree_cap:
            raise DegreeCapExceeded(f.total_degree(), degree_cap)
        r = _reduce(ring, f._t, [basis[i] for i in active])
        if r:
            add(r, f.total_degree())

    while heap:
        sugar, kl, i, j = heapq.heappop(heap)
        entry = pairs.pop((i, j), None)
        if entry is None:
            continue
        l = entry[2]
        if degree(l) > degree_cap:
            raise DegreeCapExceeded(degree(l), degree_cap)
        s = _spoly(ring, basis[i], basis[j], l)
        r = _reduce(ring, s, [basis[k] for k in active])
        if r:
            add(r, sugar)

    return _interreduce(ring, [basis[i] for i in active])


def _spoly(ring: PolynomialRing, a: _Reducer, b: _Reducer, l: int) -> dict[int, int]:
    p = ring.p
    sa, sb = l - a.lm, l - b.lm
    out: dict[int, int] = {}
    for m, _k, c in a.tail:
        out[m + sa] = c
    get = out.get
    for m, _k, c in b.tail:
        nm = m + sb
        v = (get(nm, 0) - c) % p
        if v:
            out[nm] = v
        else:
            out.pop(nm, None)
    return out


def _interreduce(ring: PolynomialRing, minimal: list[_Reducer]) -> GroebnerBasis:
    out = []
    for idx, r in enumerate(minimal):
        tail = {m: c for m, _k, c in r.tail}
        red = _reduce(ring, tail, minimal, skip=idx)
        red[r.lm] = 1
        out.append(Polynomial(ring, red))
    out.sort(key=lambda g: ring.key(g.leading_monomial()))
    return GroebnerBasis(ring, tuple(out), True)


def reducers_of(G: GroebnerBasis) -> list[_Reducer]:
    return [_Reducer(g) for g in G.generators]


def normal_form(f: Polynomial, G: GroebnerBasis, _reducers: list[_Reducer] | None = None) -> Polynomial:
    """Remainder of f on division by G (no term divisible by a leading monomial of G)."""
    ring = G.ring
    if (f.ring.p, f.ring.variables) != (ring.p, ring.variables):
        raise RingMismatchError("polynomial and basis from different rings")
    reds = _reducers if _reducers is not None else reducers_of(G)
    return Polynomial(ring, _reduce(ring, f._t, reds))


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    ring = f.ring
    a, b = _Reducer(f.monic()), _Reducer(g.monic())
    return Polynomial(ring, _spoly(ring, a, b, ring.lcm(a.lm, b.lm)))


def is_groebner(G: GroebnerBasis) -> bool:
    """Check that every S-polynomial reduces to zero (independent of pair criteria)."""
    reds = reducers_of(G)
    for a, b in combinations(reds, 2):
        s = _spoly(G.ring, a, b, G.ring.lcm(a.lm, b.lm))
        if _reduce(G.ring, s, reds):
            return False
    return True


def is_reduced(G: GroebnerBasis) -> bool:
    ring = G.ring
    lms = G.leading_monomials()
    for g in G.generators:
        if g.leading_coefficient() != 1:
            return False
        for m in g.term_dict():
            for lm in lms:
                if lm != g.leading_monomial() and ring.divides(lm, m):
                    return False
    return True


# standard monomials ------------------------------------------------------------------


def is_zero_dimensional(G: GroebnerBasis) -> bool:
    """True iff every variable has a pure power among the leading monomials."""
    n = G.ring.nvars
    lms = [G.ring.exponents(m) for m in G.leading_monomials()]
    for i in range(n):
        if not any(e[i] > 0 and sum(e) == e[i] for e in lms) and not any(sum(e) == 0 for e in lms):
            return False
    return True


def _count(lms: list[tuple[int, ...]], n: int) -> int:
    # lms restricted to those whose prefix divides the current prefix
    def rec(i: int, prefix: list[int], live: list[tuple[int, ...]]) -> int:
        if i == n - 1:
            bound = None
            for e in live:
                if bound is None or e[i] < bound:
                    bound = e[i]
            return bound
        total = 0
        a = 0
        while True:
            prefix.append(a)
            nxt = [e for e in live if e[i] <= a]
            sub = rec(i + 1, prefix, nxt)
            prefix.pop()
            if sub == 0:
                return total
            total += sub
            a += 1

    return rec(0, [], lms)


def _enumerate(lms: list[tuple[int, ...]], n: int) -> Iterator[tuple[int, ...]]:
    def rec(i: int, prefix: list[int], live: list[tuple[int, ...]]) -> Iterator[tuple[int, ...]]:
        if i == n - 1:
            bound = min(e[i] for e in live)
            for b in range(bound):
                yield tuple(prefix) + (b,)
            return
        a = 0
        while True:
            prefix.append(a)
            nxt = [e for e in live if e[i] <= a]
            found = False
            for mono in rec(i + 1, prefix, nxt):
                found = True
                yield mono
            prefix.pop()
            if not found:
                return
            a += 1

    return rec(0, [], lms)


def standard_monomial_count(G: GroebnerBasis) -> int | float:
    """Number of monomials outside the leading-term ideal; ``math.inf`` if not Artinian."""
    if not is_zero_dimensional(G):
        return math.inf
    if G.is_unit():
        return 0
    lms = [G.ring.exponents(m) for m in G.leading_monomials()]
    return _count(lms, G.ring.nvars)


def standard_monomials(G: GroebnerBasis) -> list[int]:
    """Packed standard monomials of a zero-dimensional basis."""
    if not is_zero_dimensional(G):
        raise ValueError("quotient is not Artinian")
    if G.is_unit():
        return []
    from .algebra import pack
    lms = [G.ring.exponents(m) for m in G.leading_monomials()]
    return [pack(e) for e in _enumerate(lms, G.ring.nvars)]


def krull_dimension(G: GroebnerBasis) -> int:
    """Dimension of the leading-term ideal (-1 for the unit ideal)."""
    n = G.ring.nvars
    if G.is_unit():
        return -1
    supports = []
    for m in G.leading_monomials():
        exps = G.ring.exponents(m)
        supports.append(frozenset(i for i, e in enumerate(exps) if e))
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return -1
