"""Plumbing shared by the checkers: evaluation context and verdict assembly."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from typing import Any

from qineq.core import Constant, Func, Interval
from qineq.expr import EvalError
from qineq.ineq.sampling import integration_nodes, open_at_zero, sample_points
from qineq.ineq.verdict import (
    Hypothesis,
    HypStatus,
    InequalityId,
    InequalityVerdict,
    KindNotPermitted,
    Side,
    Verdict,
    decide,
)
from qineq.integrate import (
    IntegralKind,
    IntegrationError,
    QIntegralSpec,
    TruncationPolicy,
    qint,
)

GENERIC_KINDS = frozenset({IntegralKind.JACKSON0, IntegralKind.RESTRICTED, IntegralKind.RIEMANN})


def label(f: Func | None) -> str | None:
    if f is None:
        return None
    return getattr(f, "source", None) or str(getattr(f, "__name__", f))


def require_kind(ident: InequalityId, spec: QIntegralSpec, enforce: bool, allowed=GENERIC_KINDS) -> None:
    if enforce and spec.kind not in allowed:
        kinds = ", ".join(sorted(k.value for k in allowed))
        raise KindNotPermitted(f"{ident.value} covers only the {kinds} integrals, not {spec.kind.value}")


class Context:
    """Integration domain E_(J), its width, sample points and a J_q shortcut."""

    def __init__(self, spec: QIntegralSpec, q: float, policy: TruncationPolicy, grid: int):
        self.spec = spec
        self.q = q
        self.policy = policy
        self.grid = grid
        self.domain: Interval = spec.interval(q)
        self.width = spec.width(q)
        self.nodes = integration_nodes(spec, q)
        self.points = open_at_zero(sample_points(self.domain.a, self.domain.b, self.nodes, grid))

    def J(self, h: Func) -> float:
        return qint(h, self.spec, self.q, self.policy)


def assemble(
    ident: InequalityId,
    spec: QIntegralSpec,
    q: float,
    inputs: dict[str, Any],
    hypotheses: Callable[[dict[str, Constant]], Iterable[Hypothesis]],
    sides: Callable[[dict[str, Constant]], Iterable[Side]],
    note: str = "",
) -> InequalityVerdict:
    """Run hypothesis checks, then the inequality itself, and classify.

    Evaluation failures while checking hypotheses make the verdict
    UNTESTABLE.  Failures while evaluating the inequality are UNTESTABLE
    unless a hypothesis was already violated (then VACUOUS, slack NaN).
    """
    constants: dict[str, Constant] = {}
    echo = {k: v for k, v in inputs.items() if v is not None}

    def verdict(hyps, sds, v, extra=""):
        text = "; ".join(t for t in (note, extra) if t)
        return InequalityVerdict(ident, spec.kind.value, echo, tuple(hyps), tuple(sds), v, dict(constants), text)

    try:
        hyps = list(hypotheses(constants))
    except (EvalError, IntegrationError) as exc:
        return verdict([Hypothesis("evaluation", HypStatus.UNCHECKED, str(exc))], [], Verdict.UNTESTABLE, str(exc))
    try:
        sds = list(sides(constants))
    except (EvalError, IntegrationError, ValueError, OverflowError, KeyError) as exc:
        if any(h.status is HypStatus.VIOLATED for h in hyps):
            return verdict(hyps, [], Verdict.VACUOUS, f"inequality not evaluable: {exc}")
        return verdict(hyps, [], Verdict.UNTESTABLE, str(exc))
    return verdict(hyps, sds, decide(hyps, sds))


def base_inputs(spec: QIntegralSpec, q: float, f: Func, g: Func | None = None, **extra) -> dict[str, Any]:
    d: dict[str, Any] = {"f": label(f)}
    if g is not None:
        d["g"] = label(g)
    d.update(spec.describe())
    d["q"] = q
    d.update(extra)
    return d

