"""Hilbert-Samuel tables, coefficient fits and v-values of filtrations in dimension two."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

from .ideals import Ideal, colength, ideal_product, is_subset, power_sequence

WINDOW = 3


class NotStabilizedError(ValueError):
    pass


class VTailError(ValueError):
    pass


class ContainmentError(ValueError):
    pass


def binom2(n: int) -> int:
    """C(n+1, 2) extended by zero for n <= 0."""
    return n * (n + 1) // 2 if n > 0 else 0


def hilbert_polynomial(e0: int, e1: int, e2: int, n: int) -> int:
    return e0 * binom2(n) - e1 * n + e2


@dataclass(frozen=True)
class HilbertTable:
    description: str
    values: tuple[int, ...]  # values[n] = length(R/F_n), n = 0..n_max

    def __post_init__(self):
        if self.values and self.values[0] != 0:
            raise ValueError("a Hilbert table starts with length 0 at n = 0")

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def at(self, n: int) -> int:
        return self.values[n] if n >= 0 else 0

    def first_difference(self, n: int) -> int:
        return self.at(n) - self.at(n - 1)

    def second_difference(self, n: int) -> int:
        return self.at(n) - 2 * self.at(n - 1) + self.at(n - 2)

    def rows(self) -> list[tuple[int, int, int, int]]:
        return [(n, self.at(n), self.first_difference(n), self.second_difference(n))
                for n in range(len(self.values))]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "length", "delta", "delta2"])
        w.writerows(self.rows())
        return buf.getvalue()

    def to_json(self) -> dict:
        return {"ideal": self.description, "values": list(self.values)}


@dataclass(frozen=True)
class HilbertCoefficients:
    e0: int
    e1: int
    e2: int
    postulation: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.e0, self.e1, self.e2)

    def evaluate(self, n: int) -> int:
        return hilbert_polynomial(self.e0, self.e1, self.e2, n)


@dataclass(frozen=True)
class FiltrationTable:
    reduction: Ideal
    v: tuple[int, ...]  # v[n] for n = 1..n_max stored at index n; v[0] unused (0)
    reduction_number: int
    lengths: tuple[int, ...] = ()
    product_lengths: tuple[int, ...] = ()

    @property
    def n_max(self) -> int:
        return len(self.v) - 1

    def to_json(self) -> dict:
        return {"v": list(self.v[1:]), "reduction_number": self.reduction_number,
                "lengths": list(self.lengths)}


@dataclass
class IdentityReport:
    e0: int
    residuals: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r == 0 for r in self.residuals.values())


def hilbert_samuel_table(I: Ideal, n_max: int, description: str | None = None) -> HilbertTable:
    I.ring.require_dimension(2)
    values = [0] + [colength(P) for P in power_sequence(I, n_max)[1:]]
    return HilbertTable(description or repr(I), tuple(values))


def table_of(lengths: Sequence[int], description: str = "") -> HilbertTable:
    return HilbertTable(description, tuple(lengths))


def fit_hilbert_polynomial(T: HilbertTable, window: int = WINDOW) -> HilbertCoefficients:
    """Fit e0 C(n+1,2) - e1 n + e2 to the stable tail of the table."""
    N = T.n_max
    if N < window:
        raise NotStabilizedError(f"not stabilized: table has {N} rows, need at least {window}")
    tail = [T.second_difference(n) for n in range(N - window + 1, N + 1)]
    if len(set(tail)) != 1:
        raise NotStabilizedError(f"not stabilized: second differences {tail} over the last "
                                 f"{window} rows; raise n_max")
    e0 = tail[0]
    # e1, e2 from the last two rows
    a, b = N - 1, N
    la, lb = T.at(a), T.at(b)
    e1 = e0 * (binom2(b) - binom2(a)) - (lb - la)
    e2 = lb - e0 * binom2(b) + e1 * b
    sigma = -1
    for n in range(0, N + 1):
        if T.at(n) != hilbert_polynomial(e0, e1, e2, n):
            sigma = n
    if sigma >= N - window + 1:
        raise NotStabilizedError(f"not stabilized: table differs from the fitted polynomial at n={sigma}")
    return HilbertCoefficients(e0, e1, e2, sigma)


def filtration_v_values(F: Sequence[Ideal], J: Ideal, n_max: int | None = None,
                        check_containment: bool = True) -> FiltrationTable:
    """v(n) = length(R/J F_{n-1}) - length(R/F_n) for n = 1..n_max; F[0] is R."""
    if n_max is None:
        n_max = len(F) - 1
    if n_max >= len(F):
        raise ValueError(f"filtration has {len(F)} terms, need {n_max + 1}")
    F[0].ring.require_dimension(2)
    v = [0]
    if not F[0].is_unit():
        raise ValueError("a filtration starts with F_0 = R")
    lengths = [0]
    products = [0]
    for n in range(1, n_max + 1):
        JF = ideal_product(J, F[n - 1]) if not F[n - 1].is_unit() else J
        if check_containment and not is_subset(JF, F[n]):
            raise ContainmentError(f"J*F_{n - 1} is not contained in F_{n}")
        a = colength(JF)
        b = colength(F[n])
        v.append(a - b)
        lengths.append(b)
        products.append(a)
    r = 0
    for n in range(n_max, 0, -1):
        if v[n] != 0:
            r = n
            break
    return FiltrationTable(J, tuple(v), r, tuple(lengths), tuple(products))


def coefficients_from_v(table: FiltrationTable | Sequence[int], e0: int | None = None
                        ) -> tuple[int, int]:
    """(e1, e2) = (sum v(n), sum (n-1) v(n)); needs a zero tail."""
    v = table.v if isinstance(table, FiltrationTable) else tuple(table)
    if len(v) < 2:
        return (0, 0)
    if v[-1] != 0:
        raise VTailError(f"v-tail not zero: v({len(v) - 1}) = {v[-1]}; extend the filtration")
    e1 = sum(v[1:])
    e2 = sum((n - 1) * v[n] for n in range(1, len(v)))
    return (e1, e2)


def verify_hm_identities(table: FiltrationTable, e0: int) -> IdentityReport:
    """Residuals of v(n) = e0 - second difference of length(R/F_n)."""
    H = HilbertTable("filtration", tuple(table.lengths))
    report = IdentityReport(e0)
    for n in range(1, table.n_max + 1):
        report.residuals[n] = table.v[n] - (e0 - H.second_difference(n))
    return report


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
