"""q-integrals and numerical checks of q-analogue integral inequalities."""

from qineq.core import ConjugatePair, HypothesisParams, Interval, q_bracket
from qineq.expr import DomainError, EvalError, Expression, ExprSyntaxError, parse
from qineq.ineq import InequalityId, InequalityVerdict, Verdict, run_check
from qineq.integrate import IntegralKind, IntegralResult, QIntegralSpec, TruncationPolicy, integrate, qint
from qineq.search import SweepSpec, find_counterexample, sweep

__version__ = "0.1.0"

__all__ = [
    "ConjugatePair",
    "DomainError",
    "EvalError",
    "Expression",
    "ExprSyntaxError",
    "HypothesisParams",
    "InequalityId",
    "InequalityVerdict",
    "IntegralKind",
    "IntegralResult",
    "Interval",
    "QIntegralSpec",
    "SweepSpec",
    "TruncationPolicy",
    "Verdict",
    "find_counterexample",
    "integrate",
    "parse",
    "q_bracket",
    "qint",
    "run_check",
    "sweep",
]
