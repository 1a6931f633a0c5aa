"""Report rows and their JSON-lines / CSV / table renderings."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence

from .arith import ApproxReal, Factorization, Verdict
from .core import (
    CurveRecord,
    PrimeReport,
    PrimeType,
    TheoremCheck,
    VerificationReport,
)
from .tate import KodairaType, LocalData, Reduction
from .weierstrass import WeierstrassModel


def _fac(f: Factorization) -> list[list[int]]:
    return [[p, e] for p, e in f.factors]


def local_to_dict(d: LocalData) -> dict[str, Any]:
    return {
        "p": d.p,
        "kodaira": str(d.kodaira),
        "f": d.f_p,
        "vp_delta": d.vp_delta,
        "m": d.m_p,
        "reduction": d.reduction.value,
    }


def local_from_dict(d: dict) -> LocalData:
    return LocalData(
        p=d["p"],
        kodaira=KodairaType.parse(d["kodaira"]),
        f_p=d["f"],
        vp_delta=d["vp_delta"],
        m_p=d["m"],
        reduction=Reduction(d["reduction"]),
    )


def prime_to_dict(r: PrimeReport) -> dict[str, Any]:
    return {
        "p": r.p,
        "type": int(r.prime_type),
        "vp_delta": r.vp_delta,
        "vp_N": r.vp_N,
        "vp_j": r.vp_j,
        "delta_p": r.delta_p,
        "rhs": r.bound_rhs,
        "satisfied": r.satisfied,
        "equality": r.equality,
    }


def prime_from_dict(d: dict) -> PrimeReport:
    return PrimeReport(
        p=d["p"],
        prime_type=PrimeType(d["type"]),
        vp_delta=d["vp_delta"],
        vp_N=d["vp_N"],
        vp_j=d["vp_j"],
        delta_p=d["delta_p"],
        bound_rhs=d["rhs"],
        satisfied=d["satisfied"],
        equality=d["equality"],
    )


def report_to_dict(
    rep: VerificationReport,
    label: Optional[str] = None,
    ainvs: Optional[Sequence[int]] = None,
) -> dict[str, Any]:
    """The JSON-lines record for one curve.

    ``a_invariants`` is the input model (defaults to the minimal one);
    ``minimal`` is always the reduced minimal model.
    """
    c = rep.curve
    out: dict[str, Any] = {}
    if label is not None:
        out["label"] = label
    out.update(
        {
            "a_invariants": list(ainvs if ainvs is not None else c.minimal.ainvs),
            "minimal": list(c.minimal.ainvs),
            "Delta": c.delta_min_abs,
            "Delta_sign": 1 if c.delta_min > 0 else -1,
            "Delta_factored": _fac(c.delta_factored),
            "N": c.conductor,
            "N_factored": _fac(c.conductor_factored),
            "j": str(c.j),
            "j_num": c.j_num,
            "j_den": c.j_den,
            "locals": [local_to_dict(d) for d in c.locals],
            "primes": [prime_to_dict(r) for r in rep.primes],
            "divisibility_ok": rep.divisibility_ok,
            "height_check": rep.height_check.value,
            "theorem": {
                "A": str(rep.theorem.A),
                "B": str(rep.theorem.B),
                "applicable": rep.theorem.applicable.value,
                "holds": rep.theorem.holds.value,
            },
            "szpiro_ratio": {
                "lo": float(rep.szpiro_ratio.lo),
                "hi": float(rep.szpiro_ratio.hi),
            },
        }
    )
    return out


def report_from_dict(d: dict) -> VerificationReport:
    locals_ = tuple(local_from_dict(x) for x in d["locals"])
    curve = CurveRecord(
        minimal=WeierstrassModel(*d["minimal"]),
        delta_min=d["Delta_sign"] * d["Delta"],
        delta_min_abs=d["Delta"],
        delta_factored=Factorization(d["Delta"], tuple((p, e) for p, e in d["Delta_factored"])),
        conductor=d["N"],
        conductor_factored=Factorization(d["N"], tuple((p, e) for p, e in d["N_factored"])),
        locals=locals_,
        j=Fraction(d["j"]),
    )
    th = d["theorem"]
    ratio = d["szpiro_ratio"]
    return VerificationReport(
        curve=curve,
        primes=tuple(prime_from_dict(x) for x in d["primes"]),
        divisibility_ok=d["divisibility_ok"],
        height_check=Verdict(d["height_check"]),
        theorem=TheoremCheck(
            Fraction(th["A"]), Fraction(th["B"]), Verdict(th["applicable"]), Verdict(th["holds"])
        ),
        szpiro_ratio=ApproxReal(Fraction(ratio["lo"]), Fraction(ratio["hi"]), 53),
    )


def dumps(row: dict) -> str:
    return json.dumps(row, separators=(",", ":"))


# ---------------------------------------------------------------------------
# rendering


def _cell(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        if v and all(isinstance(x, (list, tuple)) and len(x) == 2 for x in v):
            return "*".join(f"{p}^{e}" if e != 1 else str(p) for p, e in v) or "1"
        if v and isinstance(v[0], dict):
            return "; ".join(" ".join(f"{k}={_cell(x)}" for k, x in item.items()) for item in v)
        return "[" + ",".join(str(x) for x in v) + "]"
    if isinstance(v, dict):
        return " ".join(f"{k}={_cell(x)}" for k, x in v.items())
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def render(rows: Iterable[dict], fmt: str, columns: Optional[Sequence[str]] = None) -> str:
    rows = list(rows)
    if fmt == "jsonl":
        return "".join(dumps(r) + "\n" for r in rows)
    if columns is None:
        columns = []
        for r in rows:
            columns += [k for k in r if k not in columns]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow(
                [
                    json.dumps(r[c], separators=(",", ":")) if isinstance(r.get(c), (list, dict)) else _csv_scalar(r.get(c))
                    for c in columns
                ]
            )
        return buf.getvalue()
    if fmt == "table":
        cells = [[_cell(r.get(c)) for c in columns] for r in rows]
        widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        lines += ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in cells]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _csv_scalar(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)
