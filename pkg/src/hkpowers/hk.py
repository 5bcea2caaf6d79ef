"""Ratliff-Rush closures, reductions, Frobenius Hilbert coefficients and HK tables."""
from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .filtrations import (
    FiltrationTable,
    NotStabilizedError,
    binom2,
    coefficients_from_v,
    filtration_v_values,
    fit_hilbert_polynomial,
    hilbert_samuel_table,
    table_of,
    verify_hm_identities,
)
from .groebner import DegreeCapExceeded
from .ideals import (
    Ideal,
    SupportError,
    colength,
    contains,
    frobenius_power,
    ideal_colon,
    ideal_equals,
    ideal_product,
    is_subset,
    iter_powers,
    power_sequence,
)

log = logging.getLogger(__name__)

RR_CAP = 30


class ClosureNotStabilized(RuntimeError):
    pass


class ReductionNotFound(RuntimeError):
    pass


class CMCheckFailed(RuntimeError):
    """The two computations of the multiplicity disagree."""


@dataclass
class RRClosureResult:
    ideal: Ideal
    closure: Ideal
    stabilization_index: int
    confirmations: int
    transcript: list[tuple[int, int]] = field(default_factory=list)  # (n, colength of K_n)


def ratliff_rush_closure(I: Ideal, confirm: int = 1, cap: int = RR_CAP) -> RRClosureResult:
    """Union of the ascending chain K_n = I^{n+1} : I^n, stopped after confirm+1 equal terms."""
    if confirm < 1:
        raise ValueError("confirm must be at least 1")
    zero = I.ring.zero_ideal()
    if all(contains(zero, g) for g in I.generators):
        raise ValueError("the zero ideal has no regular element")
    powers = iter_powers(I)
    prev = next(powers)
    transcript: list[tuple[int, int]] = []
    chain: list[Ideal] = []
    start = None
    for n in range(1, cap + 1):
        nxt = next(powers)
        K = ideal_colon(nxt, prev)
        prev = nxt
        K.groebner()
        transcript.append((n, colength(K) if K.is_zero_dimensional() else -1))
        if chain and ideal_equals(K, chain[-1]):
            if start is None:
                start = n - 1
            if n - start >= confirm:
                log.debug("RR closure stabilized at n=%d after %d confirmations", start, confirm)
                return RRClosureResult(I, chain[start - 1], start, confirm, transcript)
        else:
            start = None
        chain.append(K)
    raise ClosureNotStabilized(f"Ratliff-Rush chain did not stabilize within n <= {cap}")


def rr_filtration(P: Ideal, top: int, confirm: int = 1) -> tuple[list[Ideal], list[int], list[int]]:
    """Closures of P^0..P^top, made consistent from the top down.

    The true closures satisfy RR(P^{n+1}) : P = RR(P^n), so adding
    (F_{n+1} : P) to F_n is sound and repairs chains that plateau before
    they stabilize.  Returns (closures, stabilization indices, levels enlarged).
    """
    powers = power_sequence(P, top)
    closures = [powers[0]]
    index = [0]
    for n in range(1, top + 1):
        res = ratliff_rush_closure(powers[n], confirm)
        closures.append(res.closure)
        index.append(res.stabilization_index)
    enlarged = []
    for n in range(top - 1, 0, -1):
        down = ideal_colon(closures[n + 1], P)
        if not is_subset(down, closures[n]):
            closures[n] = Ideal(P.ring, down.groebner().generators, _gb=down.groebner(),
                                _local=P._local)
            enlarged.append(n)
            log.info("RR level %d enlarged by the descending pass", n)
    return closures, index, sorted(enlarged)


def ratliff_rush_chain(I: Ideal, n_max: int) -> list[Ideal]:
    """K_1 .. K_{n_max} without a stopping rule (for ascent tests)."""
    powers = power_sequence(I, n_max + 1)
    return [ideal_colon(powers[n + 1], powers[n]) for n in range(1, n_max + 1)]


@dataclass
class ReductionData:
    ideal: Ideal
    reduction: Ideal
    reduction_number: int
    transcript: list[str] = field(default_factory=list)
    seed: int | None = None


def reduction_number(I: Ideal, J: Ideal, r_cap: int = 10) -> tuple[int | None, list[str]]:
    """Smallest r <= r_cap with I^{r+1} = J I^r, plus the equalities checked."""
    powers = power_sequence(I, r_cap + 1)
    transcript = []
    for r in range(0, r_cap + 1):
        lhs = powers[r + 1]
        rhs = J if r == 0 else ideal_product(J, powers[r])
        eq = ideal_equals(lhs, rhs)
        transcript.append(f"I^{r + 1} {'=' if eq else '!='} J*I^{r}")
        if eq:
            return r, transcript
    return None, transcript


def verify_reduction(I: Ideal, J: Ideal, r_cap: int = 10) -> ReductionData:
    if not is_subset(J, I):
        raise ReductionNotFound("the proposed reduction is not contained in I")
    if not J.is_zero_dimensional():
        raise ReductionNotFound("the proposed reduction is not m-primary")
    r, transcript = reduction_number(I, J, r_cap)
    if r is None:
        raise ReductionNotFound(f"J is not a reduction of I with r <= {r_cap}")
    return ReductionData(I, J, r, transcript)


def find_minimal_reduction(I: Ideal, seed: int = 0, attempts: int = 20, r_cap: int = 10,
                           J: Ideal | None = None) -> ReductionData:
    """Two random F_p-combinations of the generators of I, kept if they form a reduction."""
    ring = I.ring
    ring.require_dimension(2)
    if not I.is_zero_dimensional():
        raise ValueError("find_minimal_reduction needs an m-primary ideal")
    if J is not None:
        return verify_reduction(I, J, r_cap)
    rng = random.Random(seed)
    p = ring.p
    gens = list(I.generators)
    R = ring.poly_ring
    for attempt in range(attempts):
        combos = []
        for _ in range(2):
            f = R.zero()
            for g in gens:
                c = rng.randrange(p)
                if c:
                    f = f + g * R.constant(c)
            combos.append(f)
        log.info("reduction attempt %d (seed %d): %s", attempt, seed,
                 ", ".join(str(f) for f in combos))
        if any(not f for f in combos):
            continue
        cand = ring.ideal(combos)
        if not cand.is_zero_dimensional():
            continue
        try:
            # equality of powers is tested globally, so J must live at the origin only
            colength(cand)
        except SupportError:
            log.info("attempt %d: candidate has points away from the origin", attempt)
            continue
        r, transcript = reduction_number(I, cand, r_cap)
        if r is not None:
            return ReductionData(I, cand, r, transcript, seed)
    raise ReductionNotFound(f"no reduction found in {attempts} attempts; try a larger field, "
                            "more attempts, or supply J explicitly")


def stability_check(I: Ideal, J: Ideal) -> bool:
    """I^2 = J I."""
    return ideal_equals(ideal_product(I, I), ideal_product(J, I))


def multiplicity(I: Ideal, red: ReductionData, n_max: int = 6, n_limit: int = 16) -> int:
    """e(I) as colength of the reduction, checked against the fitted Hilbert polynomial."""
    e = colength(red.reduction)
    n = max(n_max, red.reduction_number + 4)
    while True:
        try:
            fit = fit_hilbert_polynomial(hilbert_samuel_table(I, n))
            break
        except NotStabilizedError:
            if n >= n_limit:
                raise
            n += 2
    if fit.e0 != e:
        raise CMCheckFailed(f"colength of the reduction is {e} but the Hilbert polynomial of I "
                            f"has e0 = {fit.e0}; is R really Cohen-Macaulay?")
    return e


@dataclass
class FrobeniusRow:
    """Everything computed for one Frobenius power q."""
    q: int
    ordinary: list[int]  # length(R/(I^[q])^n), n = 0..n_max
    closed: list[int]  # length(R/RR((I^[q])^n)), n = 0..n_max
    v: list[int]
    e0: int
    e1: int
    e2: int
    rr_index: list[int]
    hm_residuals: dict[int, int]
    enlarged: list[int] = field(default_factory=list)

    @property
    def gaps(self) -> list[int]:
        return [a - b for a, b in zip(self.ordinary, self.closed)]


def _frobenius_row(I: Ideal, J: Ideal, r: int, e: int, q: int, n_max: int,
                   confirm: int = 1) -> FrobeniusRow:
    P = frobenius_power(I, q)
    Jq = frobenius_power(J, q)
    top = max(n_max, r + 1)
    powers = power_sequence(P, n_max)
    closures, rr_index, enlarged = rr_filtration(P, top, confirm)
    table = filtration_v_values(closures, Jq, top)
    e0 = q * q * e
    e1, e2 = coefficients_from_v(table)
    hm = verify_hm_identities(table, e0)
    return FrobeniusRow(q=q, ordinary=[0] + [colength(P_) for P_ in powers[1:n_max + 1]],
                        closed=list(table.lengths[:n_max + 1]), v=list(table.v),
                        e0=e0, e1=e1, e2=e2, rr_index=rr_index, hm_residuals=hm.residuals,
                        enlarged=enlarged)


@dataclass(frozen=True)
class FrobeniusCoefficients:
    q: int
    e0: int
    e1: int
    e2: int
    filtration: FiltrationTable

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.e0, self.e1, self.e2)


def frobenius_coefficients(I: Ideal, red: ReductionData, q: int, confirm: int = 1
                           ) -> FrobeniusCoefficients:
    """(e0, e1, e2) of I^[q] from the v-values of the Ratliff-Rush filtration."""
    I.ring.require_dimension(2)
    e = multiplicity(I, red)
    r = red.reduction_number
    P = frobenius_power(I, q)
    closures = rr_filtration(P, r + 1, confirm)[0]
    table = filtration_v_values(closures, frobenius_power(red.reduction, q), r + 1)
    e1, e2 = coefficients_from_v(table)
    return FrobeniusCoefficients(q, q * q * e, e1, e2, table)


def frobenius_coefficients_by_fit(I: Ideal, q: int, n_max: int = 8):
    """Independent route: fit the Hilbert polynomial of the ordinary powers of I^[q]."""
    return fit_hilbert_polynomial(hilbert_samuel_table(frobenius_power(I, q), n_max))


@dataclass
class HKReport:
    ideal: str
    reduction: str
    reduction_number: int
    multiplicity: int
    n_max: int
    rows: list[FrobeniusRow] = field(default_factory=list)

    @property
    def qs(self) -> list[int]:
        return [row.q for row in self.rows]

    def row(self, q: int) -> FrobeniusRow:
        for row in self.rows:
            if row.q == q:
                return row
        raise KeyError(q)

    def normalized_ehk(self, q: int, n: int) -> Fraction:
        return Fraction(self.row(q).ordinary[n], q * q)

    def normalized_rr(self, q: int, n: int) -> Fraction:
        return Fraction(self.row(q).closed[n], q * q)

    def gap(self, q: int, n: int) -> int:
        return self.row(q).gaps[n]

    def L1(self, q: int) -> Fraction:
        return Fraction(self.row(q).e1, q * q)

    def L2(self, q: int) -> Fraction:
        return Fraction(self.row(q).e2, q * q)

    def f_value(self, q: int, n: int) -> Fraction:
        return self.normalized_ehk(q, n) - self.multiplicity * binom2(n) + self.L1(q) * n

    def extrapolate(self, series: str) -> Fraction | None:
        """Heuristic a + b/q fit through the last two rows; not a certified limit."""
        if len(self.rows) < 2:
            return None
        (q1, q2) = self.qs[-2:]
        get = {"L1": self.L1, "L2": self.L2}[series]
        v1, v2 = get(q1), get(q2)
        return (q2 * v2 - q1 * v1) / (q2 - q1)

    def invariants_hold(self) -> bool:
        return all(g >= 0 for row in self.rows for g in row.gaps)

    def to_json(self) -> dict:
        rows = []
        for row in self.rows:
            q = row.q
            rows.append({
                "q": q,
                "ordinary_lengths": row.ordinary,
                "rr_lengths": row.closed,
                "normalized_ehk": [str(self.normalized_ehk(q, n)) for n in range(len(row.ordinary))],
                "normalized_rr": [str(self.normalized_rr(q, n)) for n in range(len(row.closed))],
                "gaps": row.gaps,
                "v": row.v[1:],
                "coefficients": [row.e0, row.e1, row.e2],
                "L1": str(self.L1(q)),
                "L2": str(self.L2(q)),
                "f": [str(self.f_value(q, n)) for n in range(len(row.ordinary))],
                "rr_stabilization": row.rr_index[1:],
                "rr_levels_enlarged": row.enlarged,
            })
        out = {"ideal": self.ideal, "reduction": self.reduction,
               "reduction_number": self.reduction_number, "multiplicity": self.multiplicity,
               "n_max": self.n_max, "rows": rows}
        if len(self.rows) >= 2:
            out["extrapolation_heuristic"] = {"L1": str(self.extrapolate("L1")),
                                              "L2": str(self.extrapolate("L2"))}
        return out


def _row_job(args):
    I, J, r, e, q, n_max, confirm = args
    return _frobenius_row(I, J, r, e, q, n_max, confirm)


def default_e_max(p: int) -> int:
    return 4 if p == 2 else 2


def ehk_tables(I: Ideal, red: ReductionData, e_max: int | None = None, n_max: int = 3,
               confirm: int = 1, jobs: int = 1, qs: Sequence[int] | None = None) -> HKReport:
    ring = I.ring
    ring.require_dimension(2)
    p = ring.p
    if qs is None:
        if e_max is None:
            e_max = default_e_max(p)
        qs = [p ** k for k in range(1, e_max + 1)]
    e = multiplicity(I, red)
    r = red.reduction_number
    report = HKReport(repr(I), repr(red.reduction), r, e, n_max)
    tasks = [(I, red.reduction, r, e, q, n_max, confirm) for q in qs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            report.rows = list(pool.map(_row_job, tasks))
    else:
        report.rows = [_row_job(t) for t in tasks]
    return report


@dataclass
class Theorem41Report:
    residuals: dict[int, dict[str, object]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        for res in self.residuals.values():
            if res["a"] != 0 or res["b"] != 0 or any(v != 0 for v in res["c"].values()):
                return False
        return True


def theorem41_check(report: HKReport) -> Theorem41Report:
    """Residuals of the exact finite-q formulas for e1, e2 and the RR Hilbert function."""
    r = report.reduction_number
    if report.n_max < r + 2:
        raise ValueError(f"needs n_max >= r + 2 = {r + 2}")
    e = report.multiplicity
    out = Theorem41Report()
    for row in report.rows:
        q = row.q

        def rr(n):
            return row.closed[n] if n >= 0 else 0

        a = row.e1 - (r * q * q * e + rr(r - 1) - rr(r))
        b = row.e2 - (binom2(r - 1) * q * q * e + r * rr(r - 1) - (r - 1) * rr(r))
        c = {n: rr(n) - (row.e0 * binom2(n) - row.e1 * n + row.e2)
             for n in range(max(r - 1, 0), report.n_max + 1)}
        out.residuals[q] = {"a": a, "b": b, "c": c}
    return out


@dataclass
class InequalityReport:
    q: int
    n: int
    slack: dict[int, int]

    @property
    def ok(self) -> bool:
        return all(s >= 0 for s in self.slack.values())


def estimates_inequality_check(I: Ideal, red: ReductionData, q: int, n: int,
                               t_max: int) -> InequalityReport:
    """(t+1) l(R/P^n) - t l(R/P^{n-1}) <= l(R/P^{n+t}) - l(R/(J^[q])^t), P = I^[q]."""
    if t_max < 1:
        raise ValueError("t must be positive; t = 0 is degenerate")
    if n < red.reduction_number:
        raise ValueError(f"n must be at least the reduction number {red.reduction_number}")
    P = frobenius_power(I, q)
    Jq = frobenius_power(red.reduction, q)
    powers = power_sequence(P, n + t_max)
    jpowers = power_sequence(Jq, t_max)
    L = [colength(x) if k else 0 for k, x in enumerate(powers)]
    slack = {}
    for t in range(1, t_max + 1):
        lhs = (t + 1) * L[n] - t * L[n - 1]
        rhs = L[n + t] - colength(jpowers[t])
        slack[t] = rhs - lhs
    return InequalityReport(q, n, slack)


@dataclass
class Witness:
    q: int
    n: int
    polynomial: str


@dataclass
class SearchResult:
    witnesses: list[Witness] = field(default_factory=list)
    checked: list[tuple[int, int]] = field(default_factory=list)
    aborted: str | None = None


def star_refutation_search(I: Ideal, test_ideal: Ideal, qs: Iterable[int], ns: Iterable[int]
                           ) -> SearchResult:
    """Look for products test_ideal * ((I^[q])^{n+1} : I^[q]) escaping (I^[q])^n."""
    I.ring.require_dimension(2)
    ns = list(ns)
    out = SearchResult()
    for q in qs:
        P = frobenius_power(I, q)
        try:
            powers = power_sequence(P, max(ns) + 1)
            for n in ns:
                colon = ideal_colon(powers[n + 1], P)
                for g in colon.groebner().generators:
                    for s in test_ideal.generators:
                        cand = powers[n].normal_form(s * g)
                        if cand:
                            out.witnesses.append(Witness(q, n, str(s * g)))
                            break
                    else:
                        continue
                    break
                out.checked.append((q, n))
        except DegreeCapExceeded as exc:
            out.aborted = f"q={q}: {exc}"
            log.warning("search aborted at q=%d: %s", q, exc)
            break
    return out


def frobenius_table(I: Ideal, qs: Sequence[int]) -> list[tuple[int, int]]:
    """(q, length(R/I^[q])) pairs."""
    return [(q, colength(frobenius_power(I, q))) for q in qs]


def gap_table(I: Ideal, q: int, n_max: int, confirm: int = 1) -> list[int]:
    """g(q, n) = length(RR((I^[q])^n) / (I^[q])^n) for n = 0..n_max."""
    P = frobenius_power(I, q)
    powers = power_sequence(P, n_max)
    closures = rr_filtration(P, n_max, confirm)[0]
    return [0] + [colength(powers[n]) - colength(closures[n]) for n in range(1, n_max + 1)]


__all__ = [
    "RRClosureResult", "ReductionData", "HKReport", "FrobeniusRow", "FrobeniusCoefficients",
    "ratliff_rush_closure", "ratliff_rush_chain", "rr_filtration", "find_minimal_reduction", "verify_reduction",
    "reduction_number", "stability_check", "multiplicity", "frobenius_coefficients",
    "frobenius_coefficients_by_fit", "ehk_tables", "theorem41_check",
    "estimates_inequality_check", "star_refutation_search", "frobenius_table", "gap_table",
    "table_of",
]
