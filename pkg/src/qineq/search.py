"""Parameter sweeps with sign-change bisection, and counterexample search
for inequalities applied outside the integral kind their theorem covers."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Optional

from qineq.core import (
    DEFAULT_GRID,
    ConjugatePair,
    Constant,
    Func,
    HypothesisParams,
    Interval,
    product,
)
from qineq.expr import EvalError
from qineq.ineq import InequalityId, InequalityVerdict, Verdict, default_kind, run_check
from qineq.ineq.verdict import HypStatus, tolerance_for
from qineq.integrate import (
    DEFAULT_POLICY,
    IntegralKind,
    IntegrationError,
    QIntegralSpec,
    TruncationPolicy,
    qint,
)

DIFFERENCE_TARGETS = ("chebyshev_ab_difference", "gruss_ab_difference")
PARAMETERS = ("q", "a", "b", "p")
SOURCE_PREFIX = "source:"
DEFAULT_BISECT_TOL = 1e-6


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep of a target.

    ``target`` is a difference functional (``chebyshev_ab_difference``,
    ``gruss_ab_difference``), an inequality id (checked with its theorem's
    kind restriction), or ``source:<id>`` to evaluate the inequality's
    form on any kind.  The non-swept inputs stay fixed at ``q``, ``a``,
    ``b`` and ``params``.
    """

    target: str
    f: Func
    g: Optional[Func] = None
    parameter: str = "q"
    lo: float = 0.05
    hi: float = 0.95
    steps: int = 19
    kind: Optional[IntegralKind] = None
    a: float = 0.0
    b: float = 1.0
    n: Optional[int] = None
    q: float = 0.5
    params: HypothesisParams = field(default_factory=HypothesisParams)
    pair: Optional[ConjugatePair] = None
    bisect: bool = False
    bisect_tol: float = DEFAULT_BISECT_TOL
    grid: int = DEFAULT_GRID
    policy: TruncationPolicy = DEFAULT_POLICY

    def __post_init__(self):
        if self.parameter not in PARAMETERS:
            raise ValueError(f"parameter must be one of {', '.join(PARAMETERS)}, got {self.parameter!r}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValueError("steps must be an integer >= 2")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ValueError(f"need a finite range lo < hi, got [{self.lo!r}, {self.hi!r}]")
        if not self.bisect_tol > 0.0:
            raise ValueError("bisect_tol must be positive")
        if self.kind is not None:
            object.__setattr__(self, "kind", IntegralKind(self.kind))
        if self.is_difference:
            if self.g is None:
                raise ValueError(f"{self.target} needs g")
            if self.parameter == "p":
                raise ValueError(f"{self.target} has no exponent p to sweep")
        else:
            self.ident  # validates the id
        if self.parameter == "q" and not (0.0 < self.lo and self.hi < 1.0):
            raise ValueError("a q sweep must stay inside the open interval (0, 1)")
        if self.parameter == "a" and not (self.lo >= 0.0 and self.hi < self.b):
            raise ValueError("an a sweep must stay inside [0, b)")
        if self.parameter == "b" and not self.lo > self.a:
            raise ValueError("a b sweep must stay above a")
        if self.parameter == "p" and self.lo <= 0.0 <= self.hi:
            raise ValueError("a p sweep must not include p = 0")
        for t in (self.lo, self.hi):
            _, a, b, _ = _with_param(self, t)
            if self.is_difference:
                Interval(a, b).require_positive_a()
            else:
                _integral_spec(self, a, b)

    @property
    def is_difference(self) -> bool:
        return self.target in DIFFERENCE_TARGETS

    @property
    def ident(self) -> InequalityId:
        return InequalityId.parse(self.target.removeprefix(SOURCE_PREFIX))

    @property
    def enforce_kind(self) -> bool:
        return not self.target.startswith(SOURCE_PREFIX)

    def values(self) -> list[float]:
        n = self.steps - 1
        return [self.lo + (self.hi - self.lo) * i / n for i in range(n)] + [self.hi]


@dataclass(frozen=True)
class Row:
    param: float
    lhs: float
    rhs: float
    slack: float
    verdict: str
    bound_slack: float = math.nan

    @property
    def testable(self) -> bool:
        return self.verdict != Verdict.UNTESTABLE.name and math.isfinite(self.slack)


@dataclass(frozen=True)
class Threshold:
    """A sign change of ``quantity`` bracketed by [lo, hi]."""

    parameter: str
    lo: float
    hi: float
    slack_lo: float
    slack_hi: float
    tol: float
    quantity: str = "slack"

    @property
    def value(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def label(self) -> str:
        tag = "BOUND_CROSSING" if self.quantity == "bound" else "THRESHOLD"
        return f"{tag} {self.parameter}*={self.value:.6f}±{format_tol(self.tol)}"

    def as_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "parameter": self.parameter,
            "value": self.value,
            "lo": self.lo,
            "hi": self.hi,
            "slack_lo": self.slack_lo,
            "slack_hi": self.slack_hi,
            "tol": self.tol,
        }


@dataclass(frozen=True)
class SweepReport:
    parameter: str
    target: str
    rows: tuple[Row, ...]
    thresholds: tuple[Threshold, ...]

    @property
    def summary(self) -> dict[str, int]:
        counts = Counter(r.verdict for r in self.rows)
        out = {k: counts[k] for k in sorted(counts)}
        out["rows"] = len(self.rows)
        out["thresholds"] = len(self.thresholds)
        return out

    def as_dict(self) -> dict:
        return {
            "target": self.target,
            "parameter": self.parameter,
            "rows": [
                {"param": r.param, "lhs": _num(r.lhs), "rhs": _num(r.rhs), "slack": _num(r.slack), "verdict": r.verdict}
                for r in self.rows
            ],
            "thresholds": [t.as_dict() for t in self.thresholds],
            "summary": self.summary,
        }


def format_tol(tol: float) -> str:
    """``1e-06`` -> ``1e-6``."""
    mant, _, exp = f"{tol:g}".partition("e")
    return f"{mant}e{int(exp)}" if exp else mant


def _num(x: float) -> Optional[float]:
    return x if math.isfinite(x) else None


# --------------------------------------------------------------------------
# evaluation at one parameter value
# --------------------------------------------------------------------------


def _with_param(spec: SweepSpec, t: float) -> tuple[float, float, float, HypothesisParams]:
    q, a, b, params = spec.q, spec.a, spec.b, spec.params
    if spec.parameter == "q":
        q = t
    elif spec.parameter == "a":
        a = t
    elif spec.parameter == "b":
        b = t
    else:
        params = HypothesisParams({**params.values, "p": Constant(t)})
    return q, a, b, params


def _integral_spec(spec: SweepSpec, a: float, b: float) -> QIntegralSpec:
    kind = spec.kind or default_kind(spec.ident)
    if kind is IntegralKind.JACKSON0:
        return QIntegralSpec.jackson0(b)
    if kind is IntegralKind.RESTRICTED:
        return QIntegralSpec(kind, b, n=spec.n)
    return QIntegralSpec(kind, b, a)


def _difference_row(spec: SweepSpec, t: float) -> Row:
    q, a, b, params = _with_param(spec, t)
    iv = Interval(a, b)
    iv.require_positive_a()
    ab = QIntegralSpec.jackson_ab(a, b)
    fg = qint(product(spec.f, spec.g), ab, q, spec.policy)
    prod = qint(spec.f, ab, q, spec.policy) * qint(spec.g, ab, q, spec.policy)
    if spec.target == "chebyshev_ab_difference":
        rhs = prod / iv.width
    else:
        rhs = prod
    bound_slack = math.nan
    bounds = [params.get(k) for k in ("m", "M", "phi", "Phi")]
    if spec.target == "gruss_ab_difference" and None not in bounds:
        m, M, phi, Phi = bounds
        w = iv.width
        bound_slack = 0.25 * (M - m) * (Phi - phi) - abs(fg / w - prod / (w * w))
    slack = fg - rhs
    tol = tolerance_for(fg, rhs)
    verdict = "ZERO" if abs(slack) <= tol else ("POSITIVE" if slack > 0 else "NEGATIVE")
    return Row(t, fg, rhs, slack, verdict, bound_slack)


def _check_verdict(spec: SweepSpec, t: float) -> InequalityVerdict:
    q, a, b, params = _with_param(spec, t)
    return run_check(
        spec.ident, spec.f, spec.g, _integral_spec(spec, a, b), q, params,
        pair=spec.pair, grid=spec.grid, policy=spec.policy, enforce_kind=spec.enforce_kind,
    )


def evaluate(spec: SweepSpec, t: float) -> Row:
    """The target at parameter value ``t``; failures give an UNTESTABLE row."""
    try:
        if spec.is_difference:
            return _difference_row(spec, t)
        v = _check_verdict(spec, t)
        return Row(t, v.lhs, v.rhs, v.slack, v.verdict.name)
    except (EvalError, IntegrationError, ValueError, OverflowError, ZeroDivisionError):
        return Row(t, math.nan, math.nan, math.nan, Verdict.UNTESTABLE.name)


# --------------------------------------------------------------------------
# bracketing and bisection
# --------------------------------------------------------------------------


def _band_sign(row: Row, value: float) -> int:
    if not math.isfinite(value):
        return 0
    if abs(value) <= tolerance_for(row.lhs, row.rhs):
        return 0
    return 1 if value > 0 else -1


def _brackets(rows: Sequence[Row], value: Callable[[Row], float]) -> list[tuple[Row, Row]]:
    """Adjacent testable rows of strictly opposite sign.  Rows inside the
    zero band are skipped over, so a target that is identically zero (up to
    roundoff) yields no brackets while a root landing on a grid point is
    still bracketed by its non-zero neighbours."""
    signed = [(r, _band_sign(r, value(r))) for r in rows if r.testable and math.isfinite(value(r))]
    nonzero = [(r, s) for r, s in signed if s != 0]
    return [(r0, r1) for (r0, s0), (r1, s1) in zip(nonzero, nonzero[1:]) if s0 != s1]


def bisect(
    fn: Callable[[float], float], lo: float, hi: float, f_lo: float, f_hi: float, tol: float
) -> Optional[tuple[float, float, float, float]]:
    """Shrink [lo, hi] with f_lo * f_hi <= 0 until hi - lo <= tol.

    Uses the raw sign of ``fn``; returns None if an interior evaluation is
    not finite.
    """
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = fn(mid)
        if not math.isfinite(f_mid):
            return None
        if (f_mid <= 0.0) == (f_lo <= 0.0) and f_mid != 0.0:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return lo, hi, f_lo, f_hi


def _thresholds(spec: SweepSpec, rows: Sequence[Row], quantity: str) -> list[Threshold]:
    if quantity == "bound":
        pick = lambda r: r.bound_slack  # noqa: E731
    else:
        pick = lambda r: r.slack  # noqa: E731
    fn = lambda t: pick(evaluate(spec, t))  # noqa: E731
    out = []
    for r0, r1 in _brackets(rows, pick):
        lo, hi, f_lo, f_hi = r0.param, r1.param, pick(r0), pick(r1)
        if spec.bisect:
            res = bisect(fn, lo, hi, f_lo, f_hi, spec.bisect_tol)
            if res is None:
                continue
            lo, hi, f_lo, f_hi = res
        tol = spec.bisect_tol if spec.bisect else hi - lo
        out.append(Threshold(spec.parameter, lo, hi, f_lo, f_hi, tol, quantity))
    return out


def sweep(spec: SweepSpec) -> SweepReport:
    """Evaluate the target on ``steps`` uniformly spaced parameter values
    and report every sign change of the slack between testable neighbours.

    With ``bisect`` each bracket is refined to width ``bisect_tol``; without
    it the grid bracket itself is reported.  For ``gruss_ab_difference``
    with m, M, phi, Phi supplied, crossings of the Grüss bound are reported
    too (quantity ``"bound"``).
    """
    rows = tuple(evaluate(spec, t) for t in spec.values())
    found = _thresholds(spec, rows, "slack")
    if any(math.isfinite(r.bound_slack) for r in rows):
        found += _thresholds(spec, rows, "bound")
    found.sort(key=lambda t: (t.quantity != "slack", t.lo))
    return SweepReport(spec.parameter, spec.target, rows, tuple(found))


# --------------------------------------------------------------------------
# counterexamples
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    """First grid q where the inequality's form fails with all hypotheses
    met, plus the bisected boundary to the nearest holding grid point."""

    q: float
    verdict: InequalityVerdict
    boundary: Optional[Threshold]

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "verdict": self.verdict.as_dict(),
            "boundary": None if self.boundary is None else self.boundary.as_dict(),
        }


def _hyps_met(v: InequalityVerdict) -> bool:
    return all(h.status in (HypStatus.SATISFIED, HypStatus.ESTIMATED) for h in v.hypotheses)


def find_counterexample(
    ident: InequalityId | str,
    f: Func,
    g: Optional[Func],
    spec: QIntegralSpec,
    q_grid: Sequence[float],
    params: HypothesisParams = HypothesisParams(),
    *,
    pair: Optional[ConjugatePair] = None,
    bisect_tol: float = DEFAULT_BISECT_TOL,
    grid: int = DEFAULT_GRID,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> Optional[Counterexample]:
    """Search ``q_grid`` (ascending) for a failure of the inequality's
    form on ``spec``, ignoring the theorem's kind restriction.

    Untestable grid points are skipped.  Returns None when every testable
    point holds or has a violated hypothesis.
    """
    ident = InequalityId.parse(ident) if isinstance(ident, str) else ident

    def check(q: float) -> InequalityVerdict:
        return run_check(ident, f, g, spec, q, params, pair=pair, grid=grid, policy=policy, enforce_kind=False)

    evaluated: list[tuple[float, InequalityVerdict]] = []
    for q in sorted(q_grid):
        v = check(q)
        if v.verdict is Verdict.UNTESTABLE:
            continue
        evaluated.append((q, v))
        if v.verdict is Verdict.FAILS and _hyps_met(v):
            return Counterexample(q, v, _boundary(check, evaluated, q_grid, q, v, bisect_tol))
    return None


def _boundary(check, evaluated, q_grid, q, v, tol) -> Optional[Threshold]:
    holding = [(p, w) for p, w in evaluated[:-1] if w.verdict is Verdict.HOLDS]
    if holding:
        other, w = holding[-1]
    else:
        other = w = None
        for p in sorted(x for x in q_grid if x > q):
            cand = check(p)
            if cand.verdict is Verdict.HOLDS:
                other, w = p, cand
                break
    if other is None:
        return None

    def slack(t: float) -> float:
        r = check(t)
        return r.slack if r.verdict is not Verdict.UNTESTABLE else math.nan

    lo, hi = sorted((q, other))
    s_lo, s_hi = (v.slack, w.slack) if lo == q else (w.slack, v.slack)
    res = bisect(slack, lo, hi, s_lo, s_hi, tol)
    if res is None:
        return None
    return Threshold("q", *res, tol=tol)


__all__ = [
    "Counterexample",
    "DIFFERENCE_TARGETS",
    "Row",
    "SweepReport",
    "SweepSpec",
    "Threshold",
    "bisect",
    "evaluate",
    "find_counterexample",
    "format_tol",
    "sweep",
]
