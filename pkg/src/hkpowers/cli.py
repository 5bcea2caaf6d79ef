"""Command line front end.

Exit codes: 0 success, 1 a theorem-backed check failed, 2 bad input,
3 a resource cap (degree cap, iteration cap, table too short) was hit.
"""
from __future__ import annotations

import argparse
import csv
import datetime
import json
import logging
import sys
from pathlib import Path

from . import hk
from .algebra import AlgebraError
from .filtrations import NotStabilizedError, fit_hilbert_polynomial, hilbert_samuel_table
from .groebner import DEFAULT_DEGREE_CAP, DegreeCapExceeded
from .ideals import (
    NotArtinianError,
    SupportError,
    colength,
    contains,
    frobenius_power,
    ideal_colon,
    ideal_equals,
    ideal_power,
    ideal_product,
)
from .ringspec import RingSpec, RingSpecError, load_ringspec

EXIT_OK, EXIT_MATH, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

log = logging.getLogger("hkpowers")


class MathCheckFailed(Exception):
    pass


# plot data ---------------------------------------------------------------------------

PLOT_SERIES = {
    "ehk_normalized.csv": ("q,n,value", "length(R/(I^[q])^n) / q^2"),
    "rr_normalized.csv": ("q,n,value", "length(R/RR((I^[q])^n)) / q^2"),
    "gaps.csv": ("q,n,gap", "length(RR((I^[q])^n) / (I^[q])^n)"),
    "f_curves.csv": ("q,n,f", "length(R/(I^[q])^n)/q^2 - e(I) C(n+1,2) + (e1(I^[q])/q^2) n"),
}


def emit_plot_data(report: hk.HKReport | None, outdir: str | Path) -> list[Path]:
    """One CSV per series; an empty or missing report gives header-only files."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rows: dict[str, list[list]] = {name: [] for name in PLOT_SERIES}
    if report is not None:
        for row in report.rows:
            q = row.q
            for n in range(1, len(row.ordinary)):
                rows["ehk_normalized.csv"].append([q, n, str(report.normalized_ehk(q, n))])
                rows["rr_normalized.csv"].append([q, n, str(report.normalized_rr(q, n))])
                rows["gaps.csv"].append([q, n, report.gap(q, n)])
                rows["f_curves.csv"].append([q, n, str(report.f_value(q, n))])
    paths = []
    for name, (columns, meaning) in PLOT_SERIES.items():
        path = outdir / name
        with path.open("w", newline="") as fh:
            fh.write(f"# columns: {columns}\n# value: {meaning}\n# fractions are exact, written a/b\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns.split(","))
            w.writerows(rows[name])
        paths.append(path)
    return paths


# helpers -------------------------------------------------------------------------------


def _dump(obj: dict, out: str | None) -> None:
    obj = dict(obj)
    obj["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _target(spec: RingSpec, args):
    I = spec.ideal(args.ideal)
    q = getattr(args, "q", None) or 1
    if q != 1:
        I = frobenius_power(I, q)
    return I, q


def _reduction(spec: RingSpec, I, args) -> hk.ReductionData:
    name = args.reduction or spec.reduction
    if name is not None:
        J = spec.ideal(name)
        try:
            return hk.verify_reduction(I, J, args.r_cap)
        except hk.ReductionNotFound as exc:
            log.info("supplied reduction %s rejected for %s (%s); searching", name, args.ideal, exc)
    return hk.find_minimal_reduction(I, seed=args.seed, r_cap=args.r_cap)


def _qs(spec: RingSpec, args) -> list[int]:
    p = spec.ring.p
    if args.q:
        return [args.q]
    e_max = args.e_max if args.e_max is not None else hk.default_e_max(p)
    return [p ** k for k in range(1, e_max + 1)]


def _gens(ideal) -> list[str]:
    return [str(g) for g in ideal.groebner().generators]


# subcommands ---------------------------------------------------------------------------


def cmd_gb(spec, args):
    I, q = _target(spec, args)
    _dump({"command": "gb", "ideal": args.ideal, "q": q, "groebner_basis": _gens(I)}, args.out)


def cmd_length(spec, args):
    I, q = _target(spec, args)
    n = colength(I)
    if args.out:
        _dump({"command": "length", "ideal": args.ideal, "q": q, "length": n}, args.out)
    else:
        print(n)


def cmd_hilbert(spec, args):
    I, q = _target(spec, args)
    T = hilbert_samuel_table(I, args.n_max, args.ideal)
    out = {"command": "hilbert", "ideal": args.ideal, "q": q, "table": list(T.values)}
    try:
        fit = fit_hilbert_polynomial(T)
        out["coefficients"] = {"e0": fit.e0, "e1": fit.e1, "e2": fit.e2,
                               "postulation": fit.postulation}
    except NotStabilizedError as exc:
        out["coefficients"] = None
        out["note"] = str(exc)
    if args.csv:
        Path(args.csv).write_text(T.to_csv())
    _dump(out, args.out)


def cmd_rr(spec, args):
    I, q = _target(spec, args)
    res = hk.ratliff_rush_closure(I, confirm=args.confirm)
    _dump({"command": "rr", "ideal": args.ideal, "q": q,
           "stabilization_index": res.stabilization_index, "confirmations": res.confirmations,
           "transcript": [{"n": n, "colength": c} for n, c in res.transcript],
           "closure": _gens(res.closure), "closure_colength": colength(res.closure),
           "ideal_colength": colength(I)}, args.out)


def cmd_reduce(spec, args):
    I = spec.ideal(args.ideal)
    red = _reduction(spec, I, args)
    _dump({"command": "reduce", "ideal": args.ideal, "reduction": [str(g) for g in red.reduction.generators],
           "reduction_number": red.reduction_number, "transcript": red.transcript,
           "seed": red.seed, "stable": red.reduction_number <= 1}, args.out)


def cmd_coeffs(spec, args):
    I = spec.ideal(args.ideal)
    red = _reduction(spec, I, args)
    q = args.q or spec.ring.p
    fc = hk.frobenius_coefficients(I, red, q, confirm=args.confirm)
    fit = hk.frobenius_coefficients_by_fit(I, q, args.n_max or 8)
    agree = fit.as_tuple() == fc.as_tuple()
    _dump({"command": "coeffs", "ideal": args.ideal, "q": q, "e0": fc.e0, "e1": fc.e1, "e2": fc.e2,
           "v": list(fc.filtration.v[1:]), "reduction_number": red.reduction_number,
           "oracle": {"method": "fit of ordinary powers", "e0": fit.e0, "e1": fit.e1, "e2": fit.e2,
                      "agrees": agree}}, args.out)
    if not agree:
        raise MathCheckFailed(f"coeffs q={q}: RR route {fc.as_tuple()} != fit {fit.as_tuple()}")


def _report(spec, args) -> hk.HKReport:
    I = spec.ideal(args.ideal)
    red = _reduction(spec, I, args)
    return hk.ehk_tables(I, red, n_max=args.n_max or 3, confirm=args.confirm, jobs=args.jobs,
                         qs=_qs(spec, args))


def cmd_ehk(spec, args):
    report = _report(spec, args)
    out = report.to_json()
    out["command"] = "ehk"
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        emit_plot_data(report, outdir)
        _dump(out, str(outdir / "report.json"))
    else:
        _dump(out, None)
    if not report.invariants_hold():
        raise MathCheckFailed("ehk: negative gap found")


def cmd_check_thm41(spec, args):
    if args.n_max is None:
        args.n_max = 4
    report = _report(spec, args)
    check = hk.theorem41_check(report)
    residuals = {str(q): {"a": r["a"], "b": r["b"], "c": {str(n): v for n, v in r["c"].items()}}
                 for q, r in check.residuals.items()}
    hm = {str(row.q): {str(n): v for n, v in row.hm_residuals.items()} for row in report.rows}
    hm_ok = all(v == 0 for row in report.rows for v in row.hm_residuals.values())
    _dump({"command": "check-thm41", "ideal": args.ideal, "residuals": residuals,
           "hm_residuals": hm, "ok": check.ok and hm_ok, "report": report.to_json()}, args.out)
    if not (check.ok and hm_ok):
        bad = [f"q={q}" for q, r in check.residuals.items()
               if r["a"] or r["b"] or any(r["c"].values())]
        raise MathCheckFailed(f"check-thm41: nonzero residuals at {', '.join(bad) or 'HM identities'}")


def cmd_check_ineq(spec, args):
    I = spec.ideal(args.ideal)
    red = _reduction(spec, I, args)
    q = args.q or spec.ring.p
    n = args.n if args.n is not None else red.reduction_number
    rep = hk.estimates_inequality_check(I, red, q, n, args.t_max)
    _dump({"command": "check-ineq", "ideal": args.ideal, "q": q, "n": n,
           "slack": {str(t): s for t, s in rep.slack.items()}, "ok": rep.ok}, args.out)
    if not rep.ok:
        raise MathCheckFailed(f"check-ineq q={q} n={n}: negative slack {rep.slack}")


def cmd_search(spec, args):
    I = spec.ideal(args.ideal)
    if spec.test_ideal is None:
        raise RingSpecError("search needs a test_ideal in the ring file")
    T = spec.ideal(spec.test_ideal)
    ns = range(1, (args.n_max or 2) + 1)
    res = hk.star_refutation_search(I, T, _qs(spec, args), ns)
    _dump({"command": "search", "ideal": args.ideal, "test_ideal": spec.test_ideal,
           "checked": [{"q": q, "n": n} for q, n in res.checked],
           "witnesses": [{"q": w.q, "n": w.n, "polynomial": w.polynomial} for w in res.witnesses],
           "aborted": res.aborted}, args.out)


def _is_fermat_cubic_char2(spec: RingSpec) -> bool:
    ring = spec.ring
    if ring.p != 2 or len(ring.variables) != 3:
        return False
    x, y, z = ring.variables
    other = type(ring)(2, ring.variables, [f"{x}^3+{y}^3+{z}^3"])
    return other.relation_basis == ring.relation_basis


def _is_plane_char2(spec: RingSpec) -> bool:
    return spec.ring.p == 2 and len(spec.ring.variables) == 2 and not spec.ring.relations


def paper_checks(spec: RingSpec) -> list[tuple[str, bool]]:
    """The concrete facts recorded for the known example rings."""
    ring = spec.ring
    checks = []
    if _is_fermat_cubic_char2(spec):
        x, y, z = ring.variables
        m = ring.maximal_ideal()
        m8 = frobenius_power(m, 8)
        witness = ring.parse(f"{x}^2*{y}^4*{z}^13")
        P2 = ideal_power(m8, 2)
        colon = ideal_colon(ideal_power(m8, 4), P2)
        checks.append((f"{x}^2{y}^4{z}^13 in (m^[8])^4 : (m^[8])^2", contains(colon, witness)))
        checks.append((f"{x}^2{y}^4{z}^13 not in (m^[8])^2", not contains(P2, witness)))
        J = ring.ideal([y, z])
        red = hk.verify_reduction(m, J)
        checks.append(("r_J(m) = 2 for J = (y, z)", red.reduction_number == 2))
        for q in (2, 4, 8):
            mq = frobenius_power(m, q)
            lhs = ideal_power(mq, 3)
            rhs = ideal_product(frobenius_power(J, q), ideal_power(mq, 2))
            checks.append((f"(m^[{q}])^3 = J^[{q}] (m^[{q}])^2", ideal_equals(lhs, rhs)))
    elif _is_plane_char2(spec):
        x, y = ring.variables
        I = ring.ideal([f"{x}^4", f"{x}^3*{y}", f"{x}*{y}^3", f"{y}^4"])
        closure = hk.ratliff_rush_closure(I).closure
        mid = ring.parse(f"{x}^2*{y}^2")
        checks.append((f"{x}^2{y}^2 in RR(I)", contains(closure, mid)))
        checks.append((f"{x}^2{y}^2 not in I", not contains(I, mid)))
        base = colength(I)
        checks.append(("length(R/I) = 11", base == 11))
        for q in (2, 4, 8):
            rr = colength(hk.ratliff_rush_closure(frobenius_power(I, q)).closure)
            checks.append((f"length(R/RR(I^[{q}])) = {rr} < {q * q * base}", rr < q * q * base))
    else:
        raise RingSpecError("verify-paper knows the char-2 Fermat cubic and the char-2 plane only")
    return checks


def cmd_verify_paper(spec, args):
    checks = paper_checks(spec)
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    if args.out:
        _dump({"command": "verify-paper", "checks": [{"check": n, "ok": ok} for n, ok in checks]},
              args.out)
    if not all(ok for _, ok in checks):
        raise MathCheckFailed("verify-paper: some checks failed")


COMMANDS = {
    "gb": cmd_gb, "length": cmd_length, "hilbert": cmd_hilbert, "rr": cmd_rr,
    "reduce": cmd_reduce, "coeffs": cmd_coeffs, "ehk": cmd_ehk, "check-thm41": cmd_check_thm41,
    "check-ineq": cmd_check_ineq, "search": cmd_search, "verify-paper": cmd_verify_paper,
}


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hkpowers", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("ringfile")
        sp.add_argument("--ideal", default="m")
        sp.add_argument("--q", type=_positive)
        sp.add_argument("--e-max", type=_positive)
        sp.add_argument("--n-max", type=_positive)
        sp.add_argument("--n", type=_positive)
        sp.add_argument("--t-max", type=_positive, default=3)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--confirm", type=_positive, default=1)
        sp.add_argument("--degree-cap", type=_positive, default=DEFAULT_DEGREE_CAP)
        sp.add_argument("--jobs", type=_positive, default=1)
        sp.add_argument("--r-cap", type=_positive, default=10)
        sp.add_argument("--reduction", help="name of an ideal to use as the reduction")
        sp.add_argument("--out", help="output file (directory for ehk)")
        if name == "hilbert":
            sp.add_argument("--csv", help="also write the table as CSV")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "hilbert" and args.n_max is None:
        args.n_max = 6
    where = f"{args.command} (ideal={args.ideal}, q={args.q}, n_max={args.n_max})"
    try:
        spec = load_ringspec(args.ringfile, args.degree_cap)
        COMMANDS[args.command](spec, args)
    except MathCheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_MATH
    except hk.CMCheckFailed as exc:
        print(f"{where}: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (DegreeCapExceeded, hk.ClosureNotStabilized, NotStabilizedError) as exc:
        print(f"{where}: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (RingSpecError, AlgebraError, NotArtinianError, SupportError, hk.ReductionNotFound,
            ValueError) as exc:
        print(f"{where}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
