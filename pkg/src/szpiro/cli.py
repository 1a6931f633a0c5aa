"""Command-line interface.

Exit codes: 0 all checks hold, 1 some check failed (or stayed indeterminate
at maximum precision), 2 input error (malformed or singular curve, bad
arguments), 3 factorization budget exhausted. When several occur the
first in the order 2, 3, 1 wins.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .arith import DEFAULT_POLICY, FactorizationError, FactorPolicy, is_probable_prime
from .core import ParameterError, curve_record, prime_reports, szpiro_ratio, verify
from .minimal import minimal_model
from .reports import local_to_dict, render, report_to_dict
from .sources import (
    Box,
    CurveInput,
    ParseError,
    box_inputs,
    read_csv,
    read_curve_file,
    read_lines,
)
from .tate import ConsistencyError, minimize_at, tate_local

log = logging.getLogger("szpiro")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_FACTOR = 0, 1, 2, 3

OK, FAIL, INPUT, FACTOR = "ok", "fail", "input", "factor"


@dataclass(frozen=True)
class Params:
    A: Fraction = Fraction(1)
    B: Fraction = Fraction(1)
    prime: Optional[int] = None
    policy: FactorPolicy = field(default_factory=lambda: DEFAULT_POLICY)


def _head(item: CurveInput) -> dict:
    row = {}
    if item.label is not None:
        row["label"] = item.label
    row["a_invariants"] = list(item.ainvs) if item.ainvs is not None else None
    return row


def _rows_invariants(item: CurveInput, params: Params):
    inv = item.model.invariants()
    row = _head(item)
    row.update(
        b2=inv.b2, b4=inv.b4, b6=inv.b6, b8=inv.b8, c4=inv.c4, c6=inv.c6, Delta=inv.delta, j=str(inv.j)
    )
    return [row], OK


def _rows_minimal(item: CurveInput, params: Params):
    mm = minimal_model(item.model, params.policy)
    row = _head(item)
    iso = mm.to_minimal
    row.update(
        minimal=list(mm.minimal.ainvs),
        u=str(iso.u), r=str(iso.r), s=str(iso.s), t=str(iso.t),
        Delta_min=mm.delta_min,
    )
    return [row], OK


def _rows_local(item: CurveInput, params: Params):
    model, _ = minimize_at(item.model.ainvs, params.prime)
    row = _head(item)
    row.update(local_to_dict(tate_local(model, params.prime)))
    return [row], OK


def _rows_classify(item: CurveInput, params: Params):
    c = curve_record(item.model, params.policy)
    rows = []
    ok = True
    for d, r in zip(c.locals, prime_reports(c)):
        row = _head(item)
        row.update(
            N=c.conductor, p=r.p, kodaira=str(d.kodaira), reduction=d.reduction.value,
            type=int(r.prime_type), vp_delta=r.vp_delta, vp_N=r.vp_N, vp_j=r.vp_j,
            delta_p=r.delta_p, rhs=r.bound_rhs, satisfied=r.satisfied, equality=r.equality,
        )
        rows.append(row)
        ok &= r.satisfied
    return rows, OK if ok else FAIL


def _rows_verify(item: CurveInput, params: Params):
    rep = verify(item.model, params.A, params.B, params.policy)
    row = report_to_dict(rep, item.label, item.ainvs)
    return [row], OK if rep.ok else FAIL


def row_problems(row: dict) -> list[str]:
    """Diagnostics for a failed verify row (built from the row so workers stay silent)."""
    out = [
        f"p={r['p']}: Type {r['type']} bound violated (v_p(Delta)={r['vp_delta']}, rhs={r['rhs']})"
        for r in row["primes"]
        if not r["satisfied"]
    ]
    if not row["divisibility_ok"]:
        out.append("Delta does not divide 16 den(j) N^5")
    if row["height_check"] != "holds":
        out.append(f"height bound h(j) <= 16 N log N: {row['height_check']}")
    th = row["theorem"]
    if th["applicable"] != "fails" and th["holds"] != "holds":
        out.append(f"theorem bound (A={th['A']}, B={th['B']}): applicable={th['applicable']}, holds={th['holds']}")
    return out


def _rows_ratio(item: CurveInput, params: Params):
    c = curve_record(item.model, params.policy)
    ratio = szpiro_ratio(c)
    row = _head(item)
    row.update(N=c.conductor, Delta=c.delta_min_abs, ratio_lo=float(ratio.lo), ratio_hi=float(ratio.hi))
    return [row], OK


_HANDLERS = {
    "invariants": _rows_invariants,
    "minimal": _rows_minimal,
    "local": _rows_local,
    "classify": _rows_classify,
    "verify": _rows_verify,
    "ratio": _rows_ratio,
    "scan": _rows_verify,
}


def process(command: str, item: CurveInput, params: Params) -> tuple[list[dict], str]:
    """Run one command on one input item; never raises for per-curve problems."""
    if item.error is not None:
        row = _head(item)
        row.update(error=item.error, message=item.message)
        return [row], INPUT
    try:
        return _HANDLERS[command](item, params)
    except FactorizationError as exc:
        row = _head(item)
        part = exc.partial
        row.update(
            error="factorization",
            message=str(exc),
            partial=[[p, e] for p, e in part.factors],
            cofactor=part.cofactor,
        )
        return [row], FACTOR
    except ConsistencyError as exc:
        row = _head(item)
        row.update(error="consistency", message=str(exc))
        return [row], FAIL


def _process_star(args):
    return process(*args)


def run_items(
    command: str, items: Iterable[CurveInput], params: Params, threads: int = 1
) -> Iterator[tuple[CurveInput, list[dict], str]]:
    """Process items, yielding results in input order whatever the worker count."""
    items = list(items)
    jobs = [(command, it, params) for it in items]
    if threads <= 1 or len(items) < 2:
        results = map(_process_star, jobs)
        for it, (rows, status) in zip(items, results):
            yield it, rows, status
        return
    chunk = max(1, len(jobs) // (threads * 8))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for it, (rows, status) in zip(items, pool.map(_process_star, jobs, chunksize=chunk)):
            yield it, rows, status


def exit_code(statuses: Iterable[str]) -> int:
    seen = set(statuses)
    for status, code in ((INPUT, EXIT_INPUT), (FACTOR, EXIT_FACTOR), (FAIL, EXIT_FAIL)):
        if status in seen:
            return code
    return EXIT_OK


# ---------------------------------------------------------------------------
# scan ranking


def scan_rows(results: Sequence[tuple[CurveInput, list[dict], str]], top: Optional[int]) -> list[dict]:
    """Rank verified curves by Szpiro ratio, then by number of equality flags."""
    entries = []
    for it, rows, status in results:
        row = rows[0]
        if "error" in row:
            continue
        ratio = row["szpiro_ratio"]
        mid = (Fraction(ratio["lo"]) + Fraction(ratio["hi"])) / 2
        eq = sum(1 for p in row["primes"] if p["equality"])
        entries.append((-mid, -eq, it.index, row, status))
    entries.sort(key=lambda e: e[:3])
    if top is not None:
        entries = entries[:top]
    out = []
    for rank, (_, neg_eq, _, row, status) in enumerate(entries, 1):
        r = {"rank": rank}
        if "label" in row:
            r["label"] = row["label"]
        r.update(
            a_invariants=row["a_invariants"],
            N=row["N"],
            Delta=row["Delta"],
            szpiro_ratio=row["szpiro_ratio"],
            types=" ".join(f"{p['p']}:T{p['type']}" for p in row["primes"]),
            equalities=-neg_eq,
            type3_equalities=sum(1 for p in row["primes"] if p["type"] == 3 and p["equality"]),
            ok=status == OK,
        )
        out.append(r)
    return out


_TABLE_COLUMNS = {
    "verify": [
        "label", "a_invariants", "N", "Delta", "j", "primes", "divisibility_ok",
        "height_check", "theorem", "szpiro_ratio",
    ],
}


# ---------------------------------------------------------------------------
# argument parsing


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if not is_probable_prime(p):
        raise argparse.ArgumentTypeError(f"not a prime: {p}")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="szpiro",
        description="Local data of elliptic curves over Q and checks of the "
        "small-denominator Szpiro bounds.",
    )
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("curves", nargs="*", help="inline curves, e.g. '[0,-1,1,-10,-20]' or '11a1:[0,-1,1,-10,-20]'")
    src.add_argument("--file", action="append", default=[], help="file with one curve per line")
    src.add_argument("--csv", action="append", default=[], help="CSV with an ainvs (or a1..a6) column and optional label")
    src.add_argument("--box", help="enumeration box, e.g. a1=0..1,a2=-1..1,a3=0..1,a4=-10..10,a6=-10..10")
    out = common.add_argument_group("output")
    out.add_argument("--format", choices=("table", "jsonl", "csv"), default=None)
    out.add_argument("--output", "-o", help="write to this file instead of stdout")
    run = common.add_argument_group("execution")
    run.add_argument("--threads", type=int, default=1, help="worker processes (output order is unaffected)")
    run.add_argument("--trial-bound", type=int, default=DEFAULT_POLICY.trial_bound)
    run.add_argument("--rho-budget", type=int, default=DEFAULT_POLICY.rho_budget)
    run.add_argument("-v", "--verbose", action="store_true")

    ab = argparse.ArgumentParser(add_help=False)
    ab.add_argument("--A", dest="A", type=_fraction, default=Fraction(1), help="theorem parameter A > 0 (default 1)")
    ab.add_argument("--B", dest="B", type=_fraction, default=Fraction(1), help="theorem parameter B > 0 (default 1)")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("invariants", parents=[common], help="b2..b8, c4, c6, Delta, j")
    sub.add_parser("minimal", parents=[common], help="global minimal model and isomorphism")
    loc = sub.add_parser("local", parents=[common], help="Tate's algorithm at one prime")
    loc.add_argument("-p", dest="prime", type=_prime, required=True)
    sub.add_parser("classify", parents=[common], help="Type 1/2/3 of each bad prime with its bound")
    sub.add_parser("verify", parents=[common, ab], help="full verification report")
    sub.add_parser("ratio", parents=[common], help="Szpiro ratio log Delta / log N")
    scan = sub.add_parser("scan", parents=[common, ab], help="verify many curves and rank by Szpiro ratio")
    scan.add_argument("--top", type=int, default=None, help="keep the k best-ranked curves")
    return parser


def gather_inputs(args) -> list[CurveInput]:
    items: list[CurveInput] = []
    items += read_lines(args.curves, start=len(items))
    for path in args.file:
        items += read_curve_file(path, start=len(items))
    for path in args.csv:
        items += read_csv(path, start=len(items))
    if args.box:
        items += box_inputs(Box.parse(args.box), start=len(items))
    return items


def run(args) -> int:
    params = Params(
        A=getattr(args, "A", Fraction(1)),
        B=getattr(args, "B", Fraction(1)),
        prime=getattr(args, "prime", None),
        policy=FactorPolicy(trial_bound=args.trial_bound, rho_budget=args.rho_budget),
    )
    try:
        items = gather_inputs(args)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not items and not args.box:
        print("error: no curves given", file=sys.stderr)
        return EXIT_INPUT

    log.info("%s: %d curve(s), %d worker(s)", args.command, len(items), args.threads)
    results = list(run_items(args.command, items, params, args.threads))
    log.info("done: %s", ", ".join(f"{s}={n}" for s, n in sorted(Counter(st for _, _, st in results).items())))
    fmt = args.format or ("table" if args.command in ("scan", "classify") else "jsonl")
    for it, rows, status in results:
        if status != OK and "error" in rows[0]:
            where = it.label or (list(it.ainvs) if it.ainvs else f"item {it.index}")
            print(f"{where}: {rows[0]['error']}: {rows[0]['message']}", file=sys.stderr)
        elif status == FAIL and args.command in ("verify", "scan"):
            where = it.label or list(it.ainvs)
            for msg in row_problems(rows[0]):
                print(f"{where}: {msg}", file=sys.stderr)
        elif status == FAIL and args.command == "classify":
            where = it.label or list(it.ainvs)
            for r in rows:
                if not r["satisfied"]:
                    print(f"{where}: p={r['p']}: Type {r['type']} bound violated", file=sys.stderr)

    if args.command == "scan":
        rows = scan_rows(results, args.top)
        text = render(rows, fmt, None if fmt == "jsonl" else
                      ["rank", "a_invariants", "N", "Delta", "szpiro_ratio", "types", "equalities", "type3_equalities", "ok"])
    else:
        rows = [r for _, rs, _ in results for r in rs]
        if fmt != "jsonl":
            rows = [r for r in rows if "error" not in r]
        columns = _TABLE_COLUMNS.get(args.command) if fmt == "table" else None
        if columns:
            columns = [c for c in columns if any(c in r for r in rows)]
        text = render(rows, fmt, columns)

    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code(status for _, _, status in results)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return run(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
