"""Line-oriented text formats for PL functions and interval sets.

    PL v1 <knot-count>
    <x_num>/<x_den> <y_num>/<y_den>
    ...

    IS v1 <part-count>
    <lo_num>/<lo_den> <hi_num>/<hi_den>
    ...

Rationals are always written reduced and with an explicit denominator, so
the output is a canonical byte string for a given value.  Readers accept the
looser literal grammar ``-?[0-9]+(/[1-9][0-9]*)?``.
"""

from __future__ import annotations

from typing import Iterator, List, Tuple

from .errors import FormatError
from .intervals import Interval, IntervalSet
from .plfunc import PLFunction
from .rational import format_rat, parse_rat


def dump_pl(f: PLFunction) -> str:
    lines = [f"PL v1 {len(f.xs)}"]
    lines += [f"{format_rat(x)} {format_rat(y)}" for x, y in zip(f.xs, f.ys)]
    return "\n".join(lines) + "\n"


def dump_intervalset(s: IntervalSet) -> str:
    lines = [f"IS v1 {len(s)}"]
    lines += [f"{format_rat(p.lo)} {format_rat(p.hi)}" for p in s]
    return "\n".join(lines) + "\n"


def _header(line: str, tag: str) -> int:
    fields = line.split()
    if len(fields) != 3 or fields[0] != tag or fields[1] != "v1":
        raise FormatError(f"expected '{tag} v1 <count>', got {line!r}")
    try:
        n = int(fields[2])
    except ValueError:
        raise FormatError(f"bad count in header {line!r}") from None
    if n < 0:
        raise FormatError("negative count")
    return n


def _pairs(lines: List[str], n: int, what: str):
    if len(lines) < n:
        raise FormatError(f"{what}: expected {n} rows, got {len(lines)}")
    out = []
    for row in lines[:n]:
        fields = row.split()
        if len(fields) != 2:
            raise FormatError(f"{what}: bad row {row!r}")
        out.append((parse_rat(fields[0]), parse_rat(fields[1])))
    return out


def read_pl(lines: List[str]) -> Tuple[PLFunction, List[str]]:
    """Parse one PL block from the front of ``lines``; return the rest."""
    if not lines:
        raise FormatError("empty input, expected PL block")
    n = _header(lines[0], "PL")
    body = lines[1:]
    knots = _pairs(body, n, "PL")
    try:
        f = PLFunction(knots)
    except ValueError as exc:
        raise FormatError(f"invalid PL knots: {exc}") from None
    return f, body[n:]


def read_intervalset(lines: List[str]) -> Tuple[IntervalSet, List[str]]:
    if not lines:
        raise FormatError("empty input, expected IS block")
    n = _header(lines[0], "IS")
    body = lines[1:]
    try:
        parts = [Interval(lo, hi) for lo, hi in _pairs(body, n, "IS")]
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return IntervalSet(parts), body[n:]


def content_lines(text: str) -> List[str]:
    return [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def load_pl(text: str) -> PLFunction:
    f, rest = read_pl(content_lines(text))
    if rest:
        raise FormatError("trailing data after PL block")
    return f


def load_intervalset(text: str) -> IntervalSet:
    s, rest = read_intervalset(content_lines(text))
    if rest:
        raise FormatError("trailing data after IS block")
    return s


def iter_blocks(text: str) -> Iterator[str]:
    """Split a stream holding several PL/IS blocks."""
    lines = content_lines(text)
    while lines:
        tag = lines[0].split()[0]
        if tag == "PL":
            _, rest = read_pl(lines)
        elif tag == "IS":
            _, rest = read_intervalset(lines)
        else:
            raise FormatError(f"unknown block tag {tag!r}")
        yield "\n".join(lines[: len(lines) - len(rest)]) + "\n"
        lines = rest
