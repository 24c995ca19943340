"""Command-line front end.

Every subcommand prints a plain-text report with exact rationals on stdout
and exits 0 when all of its checks hold, 1 when one fails, 2 on a violated
precondition or bad input value, 3 when a resource cap is hit, 64 on a
usage error and 74 on an I/O error.  Wall-clock time goes to stderr so that
stdout is reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import game as game_mod
from . import omalley, ornstein
from .errors import (CertificateError, DomainError, FormatError, ParameterError,
                     PreconditionError, ResourceError)
from .formats import dump_intervalset, dump_pl, load_intervalset, load_pl
from .intervals import Interval
from .plfunc import PLFunction
from .rational import format_rat, parse_rat, to_decimal
from .seeds import SEEDS, get_seed

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_RESOURCE, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3, 64, 74
MIN_CAP = 10**4


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, Fraction):
        return format_rat(v)
    return str(v)


def _approx(v) -> str:
    if isinstance(v, Fraction):
        return to_decimal(v, 12)
    if isinstance(v, int) and not isinstance(v, bool):
        return str(v)
    return "" if v is None else str(v)


@dataclass
class Check:
    name: str
    ok: bool
    lhs: Optional[Fraction] = None
    relation: str = ""
    rhs: Optional[Fraction] = None

    def line(self) -> str:
        flag = "pass" if self.ok else "fail"
        if self.lhs is None:
            return f"check {self.name}: {flag}"
        return f"check {self.name}: {flag} ({_cell(self.lhs)} {self.relation} {_cell(self.rhs)})"


@dataclass
class RunReport:
    """Outcome of one subcommand."""

    name: str
    params: List[Tuple[str, str]] = field(default_factory=list)
    columns: Tuple[str, ...] = ()
    rows: List[Tuple] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)
    values: List[Tuple[str, object]] = field(default_factory=list)
    body: str = ""  # verbatim block (PL / CERT / GAME)
    text_rows: bool = True  # False when ``body`` already carries the rows
    duration: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def text(self) -> str:
        out = [f"# report {self.name}"]
        out += [f"param {k} {v}" for k, v in self.params]
        out += [f"value {k} {_cell(v)}" for k, v in self.values]
        if self.columns and self.text_rows:
            out.append("columns " + " ".join(self.columns))
            out += ["row " + " ".join(_cell(v) for v in r) for r in self.rows]
        if self.body:
            out.append(self.body.rstrip("\n"))
        out += [c.line() for c in self.checks]
        out.append(f"result {'pass' if self.ok else 'fail'}")
        return "\n".join(out) + "\n"

    def csv(self, sidecar: Optional[str] = None) -> str:
        buf = io.StringIO()
        note = "# approximate decimal projection, 12 significant digits"
        if sidecar:
            note += f"; exact values in {os.path.basename(sidecar)}"
        buf.write(note + "\n")
        w = csv.writer(buf, lineterminator="\n")
        if self.columns:
            w.writerow(self.columns)
            for r in self.rows:
                w.writerow([_approx(v) for v in r])
        else:
            w.writerow(("name", "value"))
            for k, v in self.values:
                w.writerow((k, _approx(v)))
        return buf.getvalue()


def _table_report(name: str, t: ornstein.Table) -> RunReport:
    r = RunReport(name, columns=t.columns, rows=list(t.rows))
    r.checks = [Check(n, ok) for n, ok in t.checks]
    r.values = [(f"note{i}", n) for i, n in enumerate(t.notes)]
    return r


def emit_plot_data(obj, path: str) -> Tuple[str, str]:
    """Write a CSV projection of ``obj`` to ``path`` and an exact sidecar.

    ``obj`` may be a PLFunction, a RunReport, or a GameTranscript.
    Returns the two paths written.
    """
    sidecar = path + ".exact.txt"
    if isinstance(obj, PLFunction):
        rep = RunReport("pl", columns=("x", "y"), rows=list(obj.knots))
        exact = dump_pl(obj)
    elif isinstance(obj, game_mod.GameTranscript):
        rows = [(k, p.role, p.ball.radius) for k, p in enumerate(obj.plays)]
        rep = RunReport("game", columns=("play", "role", "radius"), rows=rows)
        exact = game_mod.dump_transcript(obj)
    elif isinstance(obj, RunReport):
        rep, exact = obj, obj.text()
    else:
        raise TypeError(f"cannot emit {type(obj).__name__}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(rep.csv(sidecar))
    with open(sidecar, "w", encoding="utf-8") as fh:
        fh.write(exact)
    return path, sidecar


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _rat(text: str) -> Fraction:
    return parse_rat(text)


def _pair(text: str) -> Tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected <rat>,<rat>")
    return parse_rat(parts[0]), parse_rat(parts[1])


def _cap(text: str) -> int:
    v = int(text)
    if v < MIN_CAP:
        raise argparse.ArgumentTypeError(f"cap must be at least {MIN_CAP}")
    return v


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _function(spec: str) -> PLFunction:
    """A seed name, or a path to a PL block."""
    if spec in SEEDS and not os.path.exists(spec):
        return get_seed(spec).base
    return load_pl(_read(spec))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_seed(a) -> RunReport:
    try:
        s = get_seed(a.name)
    except KeyError as exc:
        raise ParameterError(str(exc)) from None
    r = RunReport("seed show", [("name", s.name)], ("x", "y"), list(s.base.knots))
    r.values = [("increasing", s.n_increasing), ("decreasing", s.n_decreasing)]
    r.body = dump_pl(s.base)
    r.text_rows = False
    r.checks = [Check("f(0) = 1", s(0) == 1), Check("f(1) = 0", s(1) == 0),
                Check("no flat pieces", not s.base.flat_segments())]
    return r


def cmd_construct(a) -> RunReport:
    s = get_seed(a.seed)
    c = ornstein.LazyConstruction(s, a.depth, a.cap)
    f = ornstein.materialize(c)
    r = RunReport("construct", [("seed", s.name), ("depth", str(a.depth)), ("cap", str(a.cap))],
                  ("x", "y"), list(f.knots))
    inc, dec = ornstein.segment_counts(s, a.depth)
    r.values = [("segments", f.n_segments), ("increasing", inc), ("decreasing", dec)]
    r.checks = [Check("segment count", f.n_segments == inc + dec),
                Check("f(0) = 1", f(0) == 1), Check("f(1) = 0", f(1) == 0)]
    r.body = dump_pl(f)
    r.text_rows = False
    return r


def cmd_diverge(a) -> RunReport:
    rep = ornstein.divergence_report(a.levels, half_levels=min(a.levels, 64))
    r = _table_report("diverge", rep.table())
    r.params = [("levels", str(a.levels))]
    return r


def cmd_converge(a) -> RunReport:
    rep = ornstein.convergence_report(a.levels, cap=a.cap)
    r = _table_report("converge", rep.table())
    r.params = [("levels", str(a.levels)), ("cap", str(a.cap))]
    r.values.insert(0, ("C", rep.C))
    return r


def cmd_bprime(a) -> RunReport:
    cert = ornstein.bprime_check(a.path, a.levels, a.enclosure_depth)
    r = _table_report("bprime", cert.table())
    r.params = [("path", a.path), ("levels", str(a.levels)),
                ("enclosure-depth", str(a.enclosure_depth))]
    r.values = [("x0", cert.x0), ("y0_lo", cert.y0_enclosure.lo), ("y0_hi", cert.y0_enclosure.hi)]
    for l in cert.levels:
        r.checks.append(Check(f"level {l.n} bound", l.lower_bound >= cert.threshold,
                              l.lower_bound, ">=", cert.threshold))
    return r


def _interval_arg(a) -> Tuple[Fraction, Fraction]:
    if a.interval is None:
        return Fraction(0), Fraction(1)
    return a.interval


def cmd_gmax(a) -> RunReport:
    f = _function(a.function)
    lo, hi = _interval_arg(a)
    res = omalley.approx_max_search(f, lo, hi, a.depth)
    r = RunReport("gmax", [("function", a.function), ("interval", f"{lo},{hi}"),
                           ("depth", str(a.depth))])
    if isinstance(res, omalley.StrictIncrease):
        r.values = [("outcome", res.reason)]
        return r
    r.values = [("branch", res.branch), ("enclosure_lo", res.enclosure.lo),
                ("enclosure_hi", res.enclosure.hi), ("width", res.width)]
    r.columns = ("k", "a_k", "b_k", "y_k")
    r.rows = [(s.k, s.a, s.b, s.y) for s in res.stages]
    r.body = omalley.dump_certificate(res)
    bound = (hi - lo) / 2 ** a.depth
    if res.branch == "nested":
        r.checks.append(Check("width <= (b-a)/2^k", res.width <= bound, res.width, "<=", bound))
    r.checks += [Check(c.item, c.ok, c.lhs, c.relation, c.rhs)
                 for c in omalley.verify_certificate(f, res)]
    return r


def cmd_witness(a) -> RunReport:
    f = _function(a.function)
    lo, hi = _interval_arg(a)
    res = omalley.monotonicity_witness(f, lo, hi, a.depth)
    r = RunReport("witness", [("function", a.function), ("interval", f"{lo},{hi}")])
    if isinstance(res, omalley.StrictIncrease):
        r.values = [("outcome", "strict-increase"), ("f(x1)", res.f1), ("f(x2)", res.f2)]
        r.checks = [Check("f(x1) < f(x2)", res.f1 < res.f2, res.f1, "<", res.f2)]
    else:
        r.values = [("outcome", "witness"), ("x0", res.x0), ("f(x0)", res.value),
                    ("right_slope", res.right_slope),
                    ("enclosure_lo", res.enclosure.lo), ("enclosure_hi", res.enclosure.hi)]
        if res.right_slope is not None:
            r.checks = [Check("right slope <= 0", res.right_slope <= 0, res.right_slope, "<=",
                              Fraction(0))]
    return r


def cmd_geps(a) -> RunReport:
    h = load_intervalset(_read(a.set))
    lo, hi = _interval_arg(a)
    iv = Interval(lo, hi)
    comps = omalley.g_epsilon(h, iv, a.epsilon)
    bc = omalley.g_epsilon_measure_bound_check(h, iv, a.epsilon)
    r = RunReport("geps", [("set", a.set), ("interval", f"{lo},{hi}"),
                           ("epsilon", format_rat(a.epsilon))],
                  ("lo", "hi", "density"),
                  [(c.lo, c.hi, h.measure_in(c.lo, c.hi) / c.length) for c in comps])
    r.body = dump_intervalset(comps.as_set())
    r.values = [("measure", bc.lhs), ("bound", bc.rhs)]
    r.checks = [Check("measure bound", bc.ok, bc.lhs, "<=", bc.rhs)]
    for c in comps:
        d = h.measure_in(c.lo, c.hi) / c.length
        r.checks.append(Check(f"density on [{c.lo}, {c.hi}]", d >= a.epsilon / 2, d, ">=",
                              a.epsilon / 2))
        for p in (c.lo, c.hi):
            s = omalley.max_straddling_density(h, iv, p)
            if s is not None:
                r.checks.append(Check(f"straddle at {p}", s <= a.epsilon, s, "<=", a.epsilon))
    return r


def _game_report(t: game_mod.GameTranscript, samples: int, params) -> RunReport:
    r = RunReport("game", params, ("play", "role", "radius", "distance_bound", "m", "alpha"))
    for k, p in enumerate(t.plays):
        prm = p.params
        r.rows.append((k, p.role, p.ball.radius, p.distance_bound,
                       prm.m if prm else None, prm.alpha if prm else None))
    r.checks = [Check(n, ok, lhs, "<", rhs) for n, lhs, rhs, ok in t.nesting_checks()]
    r.checks += [Check(n, ok, v, ">", Fraction(0)) for n, v, ok in t.dq_checks()]
    for k, p in enumerate(t.plays):
        if p.params is not None:
            radius = t.plays[k - 1].ball.radius if k else t.start.radius
            r.checks += [Check(f"{n}@{k}", ok) for n, ok in p.params.invariant_checks(radius)]
    r.checks += [Check(f"sample@{s.move}:{s.piece}", s.ok, s.density, ">", s.alpha)
                 for s in t.samples]
    try:
        lim = game_mod.verify_limit_scales(t, samples)
        r.checks.append(Check("limit scales", lim.ok))
    except CertificateError as exc:
        r.checks.append(Check(f"limit scales ({exc})", False))
    r.body = game_mod.dump_transcript(t)
    return r


def cmd_game(a) -> RunReport:
    t = game_mod.simulate(a.rounds, a.seed, a.adversary)
    return _game_report(t, 4, [("rounds", str(a.rounds)), ("seed", str(a.seed)),
                               ("adversary", a.adversary)])


def cmd_verify(a) -> RunReport:
    if a.transcript:
        t = game_mod.load_transcript(_read(a.transcript))
        r = _game_report(t, 4, [("transcript", a.transcript)])
        r.name = "verify"
        return r
    if not (a.cert and a.function):
        raise UsageError("verify needs --cert with --function, or --transcript")
    f = _function(a.function)
    cert = omalley.load_certificate(_read(a.cert))
    r = RunReport("verify", [("cert", a.cert), ("function", a.function)])
    r.values = [("branch", cert.branch), ("stages", len(cert.stages))]
    r.checks = [Check(c.item, c.ok, c.lhs, c.relation, c.rhs)
                for c in omalley.verify_certificate(f, cert)]
    return r


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pldensity", description="Exact density computations for PL functions.")
    p.add_argument("--format", choices=("exact", "csv"), default="exact")
    p.add_argument("--out", help="write CSV here (with an exact sidecar)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("exact", "csv"), default=argparse.SUPPRESS)
        sp.add_argument("--out", default=argparse.SUPPRESS)

    seed = sub.add_parser("seed", help="inspect the seeds")
    seed_sub = seed.add_subparsers(dest="action", parser_class=_Parser)
    show = seed_sub.add_parser("show")
    show.add_argument("name")
    common(show)
    show.set_defaults(func=cmd_seed)

    sp = sub.add_parser("construct", help="materialize an insertion level")
    sp.add_argument("--seed", dest="seed", default="ornstein-g", choices=sorted(SEEDS))
    sp.add_argument("--depth", type=int, default=0)
    sp.add_argument("--cap", type=_cap, default=ornstein.DEFAULT_CAP)
    common(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("diverge", help="divergence of the original construction")
    sp.add_argument("--levels", type=int, default=8)
    common(sp)
    sp.set_defaults(func=cmd_diverge)

    sp = sub.add_parser("converge", help="contraction of the repaired construction")
    sp.add_argument("--levels", type=int, default=6)
    sp.add_argument("--cap", type=_cap, default=ornstein.DEFAULT_CAP)
    common(sp)
    sp.set_defaults(func=cmd_converge)

    sp = sub.add_parser("bprime", help="certified density bounds along a path")
    sp.add_argument("--path", default="central")
    sp.add_argument("--levels", type=int, default=4)
    sp.add_argument("--enclosure-depth", type=int, default=12)
    common(sp)
    sp.set_defaults(func=cmd_bprime)

    for name, func, help_ in (("gmax", cmd_gmax, "approximate-maximum search"),
                              ("witness", cmd_witness, "increase or witness dichotomy")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--function", required=True, help="seed name or PL file")
        sp.add_argument("--interval", type=_pair)
        sp.add_argument("--depth", type=int, default=20)
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("geps", help="components of G_eps")
    sp.add_argument("--set", required=True, help="IS file")
    sp.add_argument("--interval", type=_pair)
    sp.add_argument("--epsilon", type=_rat, required=True)
    common(sp)
    sp.set_defaults(func=cmd_geps)

    sp = sub.add_parser("game", help="simulate the Banach–Mazur game")
    sp.add_argument("--rounds", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--adversary", choices=sorted(game_mod.ADVERSARIES), default="random")
    common(sp)
    sp.set_defaults(func=cmd_game)

    sp = sub.add_parser("verify", help="re-check a certificate or transcript")
    sp.add_argument("--cert")
    sp.add_argument("--function")
    sp.add_argument("--transcript")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def run(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if not hasattr(args, "func"):
            raise UsageError(parser.format_usage())
        t0 = time.perf_counter()
        report = args.func(args)
        report.duration = time.perf_counter() - t0
    except UsageError as exc:
        stderr.write(str(exc) if str(exc).endswith("\n") else f"{exc}\n")
        return EXIT_USAGE
    except ResourceError as exc:
        stderr.write(f"resource error: {exc}\n")
        return EXIT_RESOURCE
    except (PreconditionError, ParameterError, DomainError, FormatError, KeyError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_PRECONDITION
    except OSError as exc:
        stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO
    try:
        if args.out:
            emit_plot_data(report, args.out)
        if args.format == "csv":
            stdout.write(report.csv())
        else:
            stdout.write(report.text())
    except OSError as exc:
        stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO
    stderr.write(f"duration {report.duration:.3f}s\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
