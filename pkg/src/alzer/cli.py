"""Command-line front end: ``verify``, ``audit``, ``bounds`` and ``mine``.

Exit codes: 0 ok, 1 usage or parse error, 2 inequality violated with its
hypotheses met (``verify``), 3 counterexamples found (``mine``).
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field

from . import __version__
from .apps import trapezoid_bounds
from .expr import ExprError, Interval, parse
from .ineq import PERIODIC_INTERVAL, THEOREM_IDS, audit_sharpness, run_check
from .quad import DEFAULT_TOL, QuadratureError
from .search import FAMILIES, TARGETS, GeneratorSpec, GeneratorSpecError, generate, mine_with_summary

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_COUNTEREXAMPLES = 3

AUDIT_THEOREMS = ("thm2", "thm3", "thm4", "thm5", "thm6")
FORMATS = ("json", "csv", "markdown")

VERIFY_COLUMNS = ("theorem_id", "lhs", "rhs", "margin", "satisfied", "sharpness_ratio", "hypotheses_met")
AUDIT_COLUMNS = ("theorem_id", "lhs", "rhs", "sharpness_ratio", "sharp_confirmed")
BOUNDS_COLUMNS = ("function", "t_rap", "classic_bound", "new_bound", "tighter")
MINE_COLUMNS = ("theorem_id", "trial", "seed", "lhs", "rhs", "margin", "hypotheses_met", "function")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    expression: str | None = None
    spec: GeneratorSpec | None = None
    interval: Interval | None = None
    theorems: tuple = ()
    tol: float = DEFAULT_TOL
    n: int = 1
    seed: int | None = None
    trials: int | None = None
    output_format: str = "json"
    output: str | None = None
    header: bool = True
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def echo(self):
        d = {"subcommand": self.subcommand}
        if self.expression is not None:
            d["expression"] = self.expression
        if self.spec is not None:
            d["generator"] = self.spec.to_dict()
        if self.interval is not None:
            d["interval"] = [self.interval.a, self.interval.b]
        if self.theorems:
            d["theorems"] = list(self.theorems)
        d["tol"] = self.tol
        d["n"] = self.n
        d["format"] = self.output_format
        return d


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------

_PI_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?)\*?pi$")


def parse_endpoint(text):
    """Decimal literal, or a multiple of pi such as ``pi``, ``2pi``, ``-0.5pi``."""
    text = text.strip()
    m = _PI_RE.match(text)
    if m:
        coef = m.group(1)
        if coef in ("", "+"):
            return math.pi
        if coef == "-":
            return -math.pi
        return float(coef) * math.pi
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad interval endpoint {text!r}") from None


def _theorem_list(values, allowed):
    out = []
    for v in values or []:
        for name in v.split(","):
            name = name.strip()
            if not name:
                continue
            if name == "all":
                out.extend(allowed)
            elif name in allowed:
                out.append(name)
            else:
                raise UsageError(f"unknown theorem {name!r}; choose from {', '.join(allowed)} or all")
    seen = []
    for name in out:
        if name not in seen:
            seen.append(name)
    return tuple(seen)


def _add_output_args(p):
    p.add_argument("--format", choices=FORMATS, default="json", dest="output_format")
    p.add_argument("--output", "-o", help="write to this path instead of stdout")
    p.add_argument("--no-header", action="store_true", help="omit the timestamped header line")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="absolute quadrature tolerance")


def _add_generator_args(p, required=False):
    g = p.add_argument_group("generator")
    g.add_argument("--family", choices=FAMILIES, required=required)
    g.add_argument("--degree", type=int, default=6)
    g.add_argument("--coef-range", type=float, nargs=2, default=(-3.0, 3.0), metavar=("LOW", "HIGH"))
    g.add_argument("--targets", default="", help=f"comma list from {', '.join(TARGETS)}")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--trials", type=int, default=100)


def build_parser():
    parser = argparse.ArgumentParser(prog="alzer", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"alzer {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("verify", help="check inequalities for one function")
    p.add_argument("--expr")
    p.add_argument("--interval", nargs=2, type=parse_endpoint, metavar=("A", "B"))
    p.add_argument("--theorem", action="append", help=f"{', '.join(THEOREM_IDS)} or all; repeatable")
    p.add_argument("--n", type=int, default=1, help="order parameter of the higher-order check")
    _add_generator_args(p)
    _add_output_args(p)

    p = sub.add_parser("audit", help="run the sharpness audit on the claimed extremal functions")
    p.add_argument("--theorem", action="append", help=f"{', '.join(AUDIT_THEOREMS)} or all (default)")
    p.add_argument("--interval", nargs=2, type=parse_endpoint, metavar=("A", "B"))
    _add_output_args(p)

    p = sub.add_parser("bounds", help="classical vs M-based trapezoid error bounds")
    p.add_argument("--expr")
    p.add_argument("--interval", nargs=2, type=parse_endpoint, metavar=("A", "B"))
    _add_generator_args(p)
    _add_output_args(p)

    p = sub.add_parser("mine", help="search a generated corpus for counterexamples")
    p.add_argument("--theorem", action="append", required=True, help=f"{', '.join(THEOREM_IDS)} or all; repeatable")
    p.add_argument("--interval", nargs=2, type=parse_endpoint, metavar=("A", "B"))
    p.add_argument("--n", type=int, default=1, help="order parameter of the higher-order check")
    p.add_argument("--workers", type=int, default=1, help="worker processes; output does not depend on this")
    _add_generator_args(p, required=True)
    _add_output_args(p)
    return parser


def _interval(args, default=None):
    if getattr(args, "interval", None) is None:
        return default
    try:
        return Interval(*args.interval)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _spec(args, interval):
    targets = frozenset(t.strip() for t in args.targets.split(",") if t.strip())
    try:
        return GeneratorSpec(
            family=args.family,
            degree=args.degree,
            coef_range=tuple(args.coef_range),
            targets=targets,
            seed=args.seed,
            trials=args.trials,
            interval=interval,
        )
    except GeneratorSpecError as exc:
        raise UsageError(str(exc)) from None


def config_from_args(args):
    cmd = args.subcommand
    cfg = RunConfig(
        subcommand=cmd,
        tol=args.tol,
        output_format=args.output_format,
        output=args.output,
        header=not args.no_header,
    )
    if not cfg.tol > 0:
        raise UsageError("--tol must be positive")
    if cmd == "audit":
        cfg.theorems = _theorem_list(args.theorem or ["all"], AUDIT_THEOREMS)
        cfg.interval = _interval(args)
        return cfg
    cfg.n = getattr(args, "n", 1)
    if cfg.n < 1:
        raise UsageError("--n must be a positive integer")
    if cmd == "mine":
        cfg.theorems = _theorem_list(args.theorem, THEOREM_IDS)
        cfg.workers = args.workers
        cfg.spec = _spec(args, _interval(args))
        cfg.interval = cfg.spec.interval
        cfg.seed, cfg.trials = args.seed, args.trials
        return cfg
    # verify / bounds: exactly one input source
    has_expr = args.expr is not None
    has_spec = args.family is not None
    if has_expr == has_spec:
        raise UsageError("give exactly one of --expr or --family")
    if cmd == "verify":
        cfg.theorems = _theorem_list(args.theorem or ["all"], THEOREM_IDS)
    if has_expr:
        cfg.expression = args.expr
        cfg.interval = _interval(args, Interval(0.0, 1.0))
    else:
        cfg.spec = _spec(args, _interval(args))
        cfg.interval = cfg.spec.interval
        cfg.seed, cfg.trials = args.seed, args.trials
    return cfg


# --------------------------------------------------------------------------
# Serialisation
# --------------------------------------------------------------------------


def format_number(v):
    """17 significant digits; non-finite values become ``null``."""
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def to_json(obj, indent=2, _level=0):
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_number(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{to_json(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return to_json(obj.item(), indent, _level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _cell(v):
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, float):
        return format_number(v)
    return str(v)


def to_table(rows, columns, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(row.get(c)) for c in columns])
        return buf.getvalue()
    lines = ["| " + " | ".join(columns) + " |", "|" + "|".join("---" for _ in columns) + "|"]
    for row in rows:
        cells = [_cell(row.get(c)).replace("|", "\\|") for c in columns]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def render(cfg, reports, columns, extra=None):
    if cfg.output_format == "json":
        payload = {"tool_version": __version__, "config_echo": cfg.echo(), "reports": reports}
        if extra:
            payload.update(extra)
        body = to_json(payload) + "\n"
    else:
        body = to_table(reports, columns, cfg.output_format)
    if cfg.header:
        stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        body = f"# alzer {__version__} generated {stamp}\n" + body
    return body


def emit(cfg, text, stdout):
    if cfg.output is None:
        stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(cfg.output))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".alzer-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, cfg.output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def _functions(cfg):
    if cfg.expression is not None:
        return [parse(cfg.expression)]
    return generate(cfg.spec)


def cmd_verify(cfg, stdout=sys.stdout):
    reports = []
    code = EXIT_OK
    for f in _functions(cfg):
        for theorem in cfg.theorems:
            interval = PERIODIC_INTERVAL if theorem in ("wirtinger", "alzer") else cfg.interval
            report = run_check(theorem, f, interval, cfg.tol, cfg.n)
            if not report.satisfied and report.hypotheses_met:
                code = EXIT_VIOLATION
            reports.append(report.to_dict())
    emit(cfg, render(cfg, reports, VERIFY_COLUMNS), stdout)
    return code


def cmd_audit(cfg, stdout=sys.stdout):
    reports = [audit_sharpness(t, cfg.interval, cfg.tol).to_dict() for t in cfg.theorems]
    emit(cfg, render(cfg, reports, AUDIT_COLUMNS), stdout)
    return EXIT_OK


def cmd_bounds(cfg, stdout=sys.stdout):
    reports = [trapezoid_bounds(f, cfg.interval, cfg.tol).to_dict() for f in _functions(cfg)]
    emit(cfg, render(cfg, reports, BOUNDS_COLUMNS), stdout)
    return EXIT_OK


def cmd_mine(cfg, stdout=sys.stdout):
    records, summary = mine_with_summary(cfg.spec, cfg.theorems, cfg.n, cfg.tol, cfg.workers)
    reports = [r.to_dict() for r in records]
    extra = {"summary": [s.to_dict() for s in summary.values()]}
    emit(cfg, render(cfg, reports, MINE_COLUMNS, extra), stdout)
    return EXIT_COUNTEREXAMPLES if records else EXIT_OK


COMMANDS = {"verify": cmd_verify, "audit": cmd_audit, "bounds": cmd_bounds, "mine": cmd_mine}


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 means "violation" here
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.subcommand](cfg, stdout)
    except (UsageError, ExprError, QuadratureError, GeneratorSpecError, ValueError) as exc:
        print(f"alzer: error: {exc}", file=stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
