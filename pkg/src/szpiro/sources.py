"""Reading curves: single lines, curve files, CSV tables and enumeration boxes."""

from __future__ import annotations

import csv
import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .weierstrass import SingularCurveError, WeierstrassModel, discriminant

_INT = r"[+-]?\d+"
_LINE_RE = re.compile(r"^\s*(?:(?P<label>[^\s:\[\]]+)\s*:\s*)?(?P<body>.*?)\s*$")
_BRACKET_RE = re.compile(
    r"^\[\s*({0})\s*,\s*({0})\s*,\s*({0})\s*,\s*({0})\s*,\s*({0})\s*\]$".format(_INT)
)
_PLAIN_RE = re.compile(r"^({0})\s+({0})\s+({0})\s+({0})\s+({0})$".format(_INT))


class ParseError(ValueError):
    def __init__(self, message: str, lineno: Optional[int] = None):
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)
        self.lineno = lineno


@dataclass(frozen=True)
class CurveInput:
    """One input item. Exactly one of ``model`` and ``error`` is set."""

    index: int
    label: Optional[str]
    ainvs: Optional[tuple[int, ...]]
    model: Optional[WeierstrassModel] = None
    error: Optional[str] = None  # "parse" or "singular"
    message: str = ""


def parse_ainvs(text: str, lineno: Optional[int] = None) -> tuple[int, int, int, int, int]:
    body = text.strip()
    m = _BRACKET_RE.match(body) or _PLAIN_RE.match(body)
    if not m:
        raise ParseError(f"expected [a1,a2,a3,a4,a6] or five integers, got {body!r}", lineno)
    return tuple(int(g) for g in m.groups())


def split_label(line: str) -> tuple[Optional[str], str]:
    m = _LINE_RE.match(line)
    return m.group("label"), m.group("body")


def parse_curve_line(line: str, lineno: Optional[int] = None) -> tuple[Optional[str], WeierstrassModel]:
    """Parse ``[label:] [a1,a2,a3,a4,a6]``; raises ParseError or SingularCurveError."""
    label, body = split_label(line)
    return label, WeierstrassModel(*parse_ainvs(body, lineno))


def format_curve_line(model: WeierstrassModel, label: Optional[str] = None) -> str:
    return f"{label}: {model}" if label else str(model)


def _make_input(index: int, label, ainvs, lineno=None) -> CurveInput:
    try:
        return CurveInput(index, label, ainvs, model=WeierstrassModel(*ainvs))
    except SingularCurveError as exc:
        where = f"line {lineno}: " if lineno is not None else ""
        return CurveInput(index, label, ainvs, error="singular", message=where + str(exc))


def read_lines(lines: Iterable[str], start: int = 0) -> Iterator[CurveInput]:
    """Curves from text lines; blank lines and ``#`` comments are skipped."""
    index = start
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        label, body = split_label(line)
        try:
            ainvs = parse_ainvs(body, lineno)
        except ParseError as exc:
            yield CurveInput(index, label, None, error="parse", message=str(exc))
        else:
            yield _make_input(index, label, ainvs, lineno)
        index += 1


def read_curve_file(path: str | Path, start: int = 0) -> Iterator[CurveInput]:
    with open(path, encoding="utf-8") as fh:
        yield from read_lines(fh, start)


def read_csv(path: str | Path, start: int = 0) -> Iterator[CurveInput]:
    """CSV with an ``ainvs`` column (or a1..a6 columns) and an optional ``label``."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        key = next((k for k in ("ainvs", "a_invariants") if k in fields), None)
        if key is None and not all(k in fields for k in ("a1", "a2", "a3", "a4", "a6")):
            raise ParseError(f"{path}: need an 'ainvs' column or columns a1..a6")
        for index, row in enumerate(reader, start):
            lineno = reader.line_num
            label = (row.get("label") or "").strip() or None
            try:
                if key:
                    ainvs = parse_ainvs(row[key] or "", lineno)
                else:
                    text = " ".join((row[k] or "").strip() for k in ("a1", "a2", "a3", "a4", "a6"))
                    ainvs = parse_ainvs(text, lineno)
            except ParseError as exc:
                yield CurveInput(index, label, None, error="parse", message=str(exc))
                continue
            yield _make_input(index, label, ainvs, lineno)


# ---------------------------------------------------------------------------
# enumeration boxes

_COORDS = ("a1", "a2", "a3", "a4", "a6")
_RANGE_RE = re.compile(r"^\s*(a[12346])\s*=\s*({0})(?:\s*\.\.\s*({0}))?\s*$".format(_INT))


@dataclass(frozen=True)
class Box:
    """Inclusive coefficient ranges; an empty range makes the whole box empty."""

    a1: tuple[int, int] = (0, 0)
    a2: tuple[int, int] = (0, 0)
    a3: tuple[int, int] = (0, 0)
    a4: tuple[int, int] = (0, 0)
    a6: tuple[int, int] = (0, 0)

    @classmethod
    def parse(cls, spec: str) -> "Box":
        """``a1=0..1,a2=-1..1,a4=-10..10``; unspecified coordinates are fixed at 0."""
        ranges = {}
        for part in filter(None, (s.strip() for s in spec.split(","))):
            m = _RANGE_RE.match(part)
            if not m:
                raise ParseError(f"bad box component {part!r} (expected e.g. a4=-10..10)")
            lo = int(m.group(2))
            hi = int(m.group(3)) if m.group(3) is not None else lo
            if m.group(1) in ranges:
                raise ParseError(f"{m.group(1)} given twice in box spec")
            ranges[m.group(1)] = (lo, hi)
        return cls(**ranges)

    def ranges(self) -> list[range]:
        return [range(lo, hi + 1) for lo, hi in (getattr(self, c) for c in _COORDS)]

    @property
    def volume(self) -> int:
        out = 1
        for r in self.ranges():
            out *= len(r)
        return out

    def __str__(self) -> str:
        return ",".join(f"{c}={lo}..{hi}" for c in _COORDS for lo, hi in [getattr(self, c)])


def enumerate_box(box: Box) -> Iterator[WeierstrassModel]:
    """Every nonsingular integral model in the box, in lexicographic order."""
    for ainvs in itertools.product(*box.ranges()):
        if discriminant(ainvs) != 0:
            yield WeierstrassModel(*ainvs)


def box_inputs(box: Box, start: int = 0) -> Iterator[CurveInput]:
    for index, model in enumerate(enumerate_box(box), start):
        yield CurveInput(index, None, model.ainvs, model=model)
