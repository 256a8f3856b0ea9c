"""``qineq`` command line: eval, check, sweep and reproduce.

Exit codes
  eval       0 converged, 2 domain error, 3 max terms reached
  check      0 holds, 4 fails, 5 vacuous, 6 untestable
  sweep      0
  reproduce  0 all cases pass, 1 otherwise
  any        1 on bad flags, bad config or malformed expressions
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from collections.abc import Sequence
from typing import Any, Optional

from qineq.core import ConjugatePair, Constant, HypothesisParams
from qineq.expr import ExprSyntaxError, UnknownFunction, parse
from qineq.ineq import InequalityId, InequalityVerdict, Verdict, default_kind, run_check
from qineq.integrate import IntegralKind, QIntegralSpec, Status, TruncationPolicy, integrate
from qineq.search import SweepReport, SweepSpec, sweep
from qineq.suites import SUITES, run_suite

ENV_MAX_TERMS = "QINEQ_MAX_TERMS"
FORMATS = ("json", "csv", "text")
CONSTANT_FLAGS = {
    "m": "m", "M": "M", "phi": "phi", "Phi": "Phi", "c": "c", "C": "C", "d": "d", "D": "D",
    "l": "l", "L": "L", "l-f": "l_f", "L-f": "L_f", "l-g": "l_g", "L-g": "L_g", "p": "p",
}  # fmt: skip
EVAL_EXIT = {Status.CONVERGED: 0, Status.DOMAIN_ERROR: 2, Status.MAX_TERMS_REACHED: 3}
CHECK_EXIT = {Verdict.HOLDS: 0, Verdict.FAILS: 4, Verdict.VACUOUS: 5, Verdict.UNTESTABLE: 6}


class UsageError(Exception):
    """Bad flags or configuration; exit status 1."""


class Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def num(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return v


def count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, fmt_default: str, formats: Sequence[str] = FORMATS) -> None:
    p.add_argument("--config", metavar="FILE", help="key=value file; explicit flags take precedence")
    p.add_argument("--format", choices=formats, default=fmt_default)


def _integral_flags(p: argparse.ArgumentParser, kind_required: bool = False) -> None:
    p.add_argument("--kind", choices=[k.value for k in IntegralKind], required=kind_required)
    p.add_argument("--f", metavar="EXPR")
    p.add_argument("--q", type=num)
    p.add_argument("--a", type=num)
    p.add_argument("--b", type=num)
    p.add_argument("--n", type=count)
    p.add_argument("--rtol", type=num)
    p.add_argument("--atol", type=num)
    p.add_argument("--max-terms", type=count)


def _constant_flags(p: argparse.ArgumentParser) -> None:
    for flag in CONSTANT_FLAGS:
        p.add_argument(f"--{flag}", type=num, dest=f"const_{CONSTANT_FLAGS[flag]}")
    p.add_argument("--alpha", type=num)
    p.add_argument("--beta", type=num)


def build_parser() -> Parser:
    root = Parser(prog="qineq", description="q-integrals and q-analogue integral inequalities")
    sub = root.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("eval", help="evaluate a q-integral")
    _integral_flags(p)
    _common(p, "text")

    p = sub.add_parser("check", help="check one inequality")
    p.add_argument("--ineq", required=False)
    _integral_flags(p)
    p.add_argument("--g", metavar="EXPR")
    _constant_flags(p)
    _common(p, "text")

    p = sub.add_parser("sweep", help="sweep a parameter and bisect sign changes")
    p.add_argument("--target")
    _integral_flags(p)
    p.add_argument("--g", metavar="EXPR")
    _constant_flags(p)
    p.add_argument("--param", choices=("q", "a", "b", "p"), default="q")
    p.add_argument("--from", dest="lo", type=num)
    p.add_argument("--to", dest="hi", type=num)
    p.add_argument("--steps", type=int)
    p.add_argument("--bisect", action="store_true", default=None)
    p.add_argument("--bisect-tol", type=num)
    _common(p, "csv")

    p = sub.add_parser("reproduce", help="run a built-in reproduction suite")
    p.add_argument("--suite", default="paper")
    p.add_argument("--seed", type=int, default=0)
    _common(p, "text", ("json", "text"))
    return root


def read_config(path: str, parser: argparse.ArgumentParser) -> dict[str, Any]:
    """Flat ``key=value`` lines (flag names without ``--``); ``#`` comments."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    argv: list[str] = []
    for i, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise UsageError(f"{path}:{i}: expected key=value")
        if key == "config":
            raise UsageError(f"{path}:{i}: config files cannot nest")
        flag = f"--{key}"
        action = parser._option_string_actions.get(flag)
        if action is None:
            raise UsageError(f"{path}:{i}: unknown key {key!r}")
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                argv.append(flag)
            elif value.lower() not in ("0", "false", "no", "off"):
                raise UsageError(f"{path}:{i}: {key} expects true or false")
        else:
            argv += [flag, value]
    defaults = parser.parse_args(argv)
    return {k: v for k, v in vars(defaults).items() if v is not None and k in _explicit_dests(parser, argv)}


def _explicit_dests(parser: argparse.ArgumentParser, argv: list[str]) -> set[str]:
    flags = (a.split("=", 1)[0] for a in argv if a.startswith("--"))
    return {parser._option_string_actions[f].dest for f in flags if f in parser._option_string_actions}


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    root = build_parser()
    args = root.parse_args(argv)
    if getattr(args, "config", None):
        sub = _subparser(root, args.command)
        explicit = _explicit_dests(sub, list(argv))
        for key, value in read_config(args.config, sub).items():
            if key not in explicit:
                setattr(args, key, value)
    return args


def _subparser(root: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in root._subparsers._group_actions:
        if name in action.choices:
            return action.choices[name]
    raise UsageError(f"unknown command {name!r}")  # pragma: no cover


# --------------------------------------------------------------------------
# shared builders
# --------------------------------------------------------------------------


def policy_from(args: argparse.Namespace) -> TruncationPolicy:
    base = TruncationPolicy()
    max_terms = args.max_terms
    if max_terms is None and os.environ.get(ENV_MAX_TERMS):
        try:
            max_terms = int(os.environ[ENV_MAX_TERMS])
        except ValueError:
            raise UsageError(f"{ENV_MAX_TERMS} must be an integer") from None
    return TruncationPolicy(
        rtol=base.rtol if args.rtol is None else args.rtol,
        atol=base.atol if args.atol is None else args.atol,
        max_terms=base.max_terms if max_terms is None else max_terms,
    )


def spec_from(args: argparse.Namespace, kind: IntegralKind) -> QIntegralSpec:
    if args.b is None:
        raise UsageError("--b is required")
    if kind is IntegralKind.RESTRICTED:
        if args.n is None:
            raise UsageError("--n is required for the restricted kind")
        if args.a is not None:
            raise UsageError("--a cannot be combined with the restricted kind (a = b q^n)")
        return QIntegralSpec.restricted(args.b, args.n)
    if args.n is not None:
        raise UsageError(f"--n only applies to the restricted kind, not {kind.value}")
    if kind is IntegralKind.JACKSON0:
        if args.a not in (None, 0.0):
            raise UsageError("jackson0 integrates over [0, b]; drop --a")
        return QIntegralSpec.jackson0(args.b)
    if args.a is None:
        raise UsageError(f"--a is required for the {kind.value} kind")
    return QIntegralSpec(kind, args.b, args.a)


def expr_from(text: Optional[str], flag: str):
    if text is None:
        raise UsageError(f"{flag} is required")
    try:
        return parse(text)
    except (ExprSyntaxError, UnknownFunction) as exc:
        raise UsageError(f"{flag}: {exc}") from None


def params_from(args: argparse.Namespace) -> HypothesisParams:
    values = {
        key: Constant(getattr(args, f"const_{key}"))
        for key in CONSTANT_FLAGS.values()
        if getattr(args, f"const_{key}", None) is not None
    }
    return HypothesisParams(values)


def pair_from(args: argparse.Namespace) -> Optional[ConjugatePair]:
    if args.alpha is None and args.beta is None:
        return None
    if args.beta is None:
        return ConjugatePair.from_alpha(args.alpha)
    if args.alpha is None:
        if not args.beta > 1.0:
            raise UsageError("--beta must exceed 1")
        return ConjugatePair.from_alpha(args.beta / (args.beta - 1.0))
    return ConjugatePair(args.alpha, args.beta)


def require_q(args: argparse.Namespace) -> float:
    if args.q is None:
        raise UsageError("--q is required")
    if not 0.0 < args.q < 1.0:
        raise UsageError(f"--q must lie in (0, 1), got {args.q!r}")
    return args.q


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "%.12g" % x
    return str(x)


def clean(obj: Any) -> Any:
    """Non-finite floats become null so the JSON stays standard."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    return obj


def dump_json(obj: Any) -> str:
    return json.dumps(clean(obj), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def render_eval(result, spec: QIntegralSpec, q: float, source: str, form: str) -> str:
    d = result.as_dict()
    if form == "json":
        return dump_json({"f": source, **spec.describe(), "q": q, **d})
    if form == "csv":
        return csv_text(
            ["value", "terms_used", "tail_bound_estimate", "status"],
            [[result.value, result.terms_used, result.tail_bound_estimate, result.status.value]],
        )
    lines = [
        f"value: {fmt(result.value)}",
        f"terms_used: {result.terms_used}",
        f"tail_bound_estimate: {fmt(result.tail_bound_estimate)}",
        f"status: {result.status.value}",
    ]
    lines += [f"diagnostic: {msg}" for msg in result.diagnostics]
    return "\n".join(lines) + "\n"


def render_verdict(v: InequalityVerdict, form: str) -> str:
    if form == "json":
        return dump_json(v.as_dict())
    if form == "csv":
        rows = [[v.id.value, s.name, s.lhs, s.relation, s.rhs, s.slack, s.tolerance, v.verdict.value] for s in v.sides]
        return csv_text(["id", "side", "lhs", "relation", "rhs", "slack", "tolerance", "verdict"], rows)
    lines = [f"{v.id.value} on {v.integral_kind}: {v.verdict.value}"]
    lines.append("inputs: " + ", ".join(f"{k}={fmt(x)}" for k, x in v.inputs.items()))
    for h in v.hypotheses:
        extra = f" ({h.detail})" if h.detail else ""
        lines.append(f"  hypothesis {h.name}: {h.status.value}{extra}")
    for k, c in v.constants.items():
        lines.append(f"  constant {k} = {fmt(c.value)} [{c.tag()}]")
    for s in v.sides:
        lines.append(
            f"  side {s.name}: {fmt(s.lhs)} {s.relation} {fmt(s.rhs)}  slack {fmt(s.slack)}  tol {fmt(s.tolerance)}"
        )
    lines.append(f"lhs {fmt(v.lhs)}  rhs {fmt(v.rhs)}  slack {fmt(v.slack)}  tolerance {fmt(v.tolerance)}")
    if v.note:
        lines.append(f"note: {v.note}")
    return "\n".join(lines) + "\n"


def render_sweep(rep: SweepReport, form: str) -> str:
    if form == "json":
        return dump_json(rep.as_dict())
    rows = [[r.param, r.lhs, r.rhs, r.slack, r.verdict] for r in rep.rows]
    rows += [[t.value, None, None, None, t.label()] for t in rep.thresholds]
    if form == "csv":
        return csv_text(["param", "lhs", "rhs", "slack", "verdict"], rows)
    lines = [f"{'param':>14} {'lhs':>20} {'rhs':>20} {'slack':>20}  verdict"]
    for r in rows:
        lines.append(f"{fmt(r[0]):>14} {fmt(r[1]):>20} {fmt(r[2]):>20} {fmt(r[3]):>20}  {r[4]}")
    lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in rep.summary.items()))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_eval(args: argparse.Namespace) -> tuple[int, str, str]:
    if args.kind is None:
        raise UsageError("--kind is required")
    kind = IntegralKind(args.kind)
    f = expr_from(args.f, "--f")
    q = require_q(args)
    spec = spec_from(args, kind)
    result = integrate(f, spec, q, policy_from(args))
    err = ""
    if result.error is not None:
        e = result.error
        err = f"{type(e).__name__}: {e.reason} at x={fmt(e.point)}" + (f" in {e.subexpr}" if e.subexpr else "") + "\n"
    elif result.status is Status.MAX_TERMS_REACHED:
        err = f"max_terms={result.terms_used} reached before convergence\n"
    return EVAL_EXIT[result.status], render_eval(result, spec, q, f.source, args.format), err


def cmd_check(args: argparse.Namespace) -> tuple[int, str, str]:
    if args.ineq is None:
        raise UsageError("--ineq is required")
    try:
        ident = InequalityId.parse(args.ineq)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    kind = IntegralKind(args.kind) if args.kind else default_kind(ident)
    f = expr_from(args.f, "--f")
    g = expr_from(args.g, "--g") if args.g is not None else None
    q = require_q(args)
    spec = spec_from(args, kind)
    try:
        v = run_check(ident, f, g, spec, q, params_from(args), pair=pair_from(args), policy=policy_from(args))
    except ValueError as exc:  # includes KindNotPermitted
        raise UsageError(str(exc)) from None
    return CHECK_EXIT[v.verdict], render_verdict(v, args.format), ""


def cmd_sweep(args: argparse.Namespace) -> tuple[int, str, str]:
    if args.target is None:
        raise UsageError("--target is required")
    if args.lo is None or args.hi is None:
        raise UsageError("--from and --to are required")
    kind = IntegralKind(args.kind) if args.kind else None
    opts: dict[str, Any] = {}
    for key in ("a", "b", "n", "q", "steps", "bisect_tol"):
        if getattr(args, key) is not None:
            opts[key] = getattr(args, key)
    try:
        spec = SweepSpec(
            args.target,
            expr_from(args.f, "--f"),
            expr_from(args.g, "--g") if args.g is not None else None,
            parameter=args.param,
            lo=args.lo,
            hi=args.hi,
            kind=kind,
            params=params_from(args),
            pair=pair_from(args),
            bisect=bool(args.bisect),
            policy=policy_from(args),
            **opts,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return 0, render_sweep(sweep(spec), args.format), ""


def cmd_reproduce(args: argparse.Namespace) -> tuple[int, str, str]:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    rep = run_suite(args.suite, args.seed)
    out = dump_json(rep.as_dict()) if args.format == "json" else rep.to_text()
    return (0 if rep.passed else 1), out, ""


COMMANDS = {"eval": cmd_eval, "check": cmd_check, "sweep": cmd_sweep, "reproduce": cmd_reproduce}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        code, out, err = COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
