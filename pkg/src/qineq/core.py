"""q-arithmetic primitives, parameter types and the [0,1] reparameterizations.

Functions throughout the package are plain callables ``float -> float``;
:class:`qineq.expr.Expression` objects qualify.  Evaluation failures are
signalled by :class:`qineq.expr.EvalError` subclasses.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from qineq.expr import DomainError, EvalError, NonFinite

Func = Callable[[float], float]

DEFAULT_GRID = 256
CONJUGATE_TOL = 1e-12


# --------------------------------------------------------------------------
# Parameter types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QParam:
    q: float

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"q must satisfy 0 < q < 1, got {self.q!r}")

    def __float__(self) -> float:
        return self.q


def as_q(q: float | QParam) -> float:
    """Validate and unwrap a q value."""
    return QParam(float(q)).q


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (0.0 <= self.a < self.b) or not math.isfinite(self.b):
            raise ValueError(f"interval requires 0 <= a < b, got [{self.a!r}, {self.b!r}]")

    @property
    def width(self) -> float:
        return self.b - self.a

    def require_positive_a(self) -> None:
        if self.a <= 0.0:
            raise ValueError(f"operation requires 0 < a < b, got a={self.a!r}")


@dataclass(frozen=True)
class ConjugatePair:
    """Hölder conjugate exponents: alpha, beta > 1 with 1/alpha + 1/beta = 1."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 1.0 and self.beta > 1.0):
            raise ValueError("conjugate exponents must both exceed 1")
        if abs(1.0 / self.alpha + 1.0 / self.beta - 1.0) > CONJUGATE_TOL:
            raise ValueError(f"1/alpha + 1/beta must equal 1 (alpha={self.alpha}, beta={self.beta})")

    @classmethod
    def from_alpha(cls, alpha: float) -> ConjugatePair:
        return cls(alpha, alpha / (alpha - 1.0))


class Source(str, Enum):
    USER_SUPPLIED = "USER_SUPPLIED"
    ESTIMATED = "ESTIMATED"


@dataclass(frozen=True)
class Constant:
    value: float
    source: Source = Source.USER_SUPPLIED
    grid_size: Optional[int] = None

    def tag(self) -> str:
        if self.source is Source.ESTIMATED:
            return f"ESTIMATED({self.grid_size})"
        return self.source.value


_PAIRS = (
    ("m", "M"),
    ("phi", "Phi"),
    ("c", "C"),
    ("d", "D"),
    ("l", "L"),
    ("l_f", "L_f"),
    ("l_g", "L_g"),
)

PARAM_NAMES = (
    "m", "M", "phi", "Phi", "c", "C", "d", "D", "l", "L",
    "l_f", "L_f", "l_g", "L_g", "p", "p1", "p2",
)  # fmt: skip


@dataclass(frozen=True)
class HypothesisParams:
    """Named bound constants, each optionally supplied by the user.

    Values not supplied are estimated by the consuming checker, which then
    records them with an ESTIMATED tag in its verdict.
    """

    values: dict[str, Constant] = field(default_factory=dict)

    def __post_init__(self):
        unknown = set(self.values) - set(PARAM_NAMES)
        if unknown:
            raise ValueError(f"unknown hypothesis constants: {sorted(unknown)}")
        for lo, hi in _PAIRS:
            if lo in self.values and hi in self.values:
                if self.values[lo].value > self.values[hi].value:
                    raise ValueError(f"{lo} must not exceed {hi}")

    @classmethod
    def of(cls, **kwargs: Optional[float]) -> HypothesisParams:
        return cls({k: Constant(float(v)) for k, v in kwargs.items() if v is not None})

    def get(self, name: str) -> Optional[float]:
        c = self.values.get(name)
        return None if c is None else c.value

    def __contains__(self, name: str) -> bool:
        return name in self.values


# --------------------------------------------------------------------------
# q-arithmetic
# --------------------------------------------------------------------------


def q_bracket(n: int, q: float | QParam) -> float:
    """[n]_q = (1 - q^n)/(1 - q) = 1 + q + ... + q^(n-1)."""
    q = as_q(q)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n <= 64:
        return math.fsum(q**k for k in range(n))
    return (1.0 - q**n) / (1.0 - q)


# --------------------------------------------------------------------------
# Transforms
# --------------------------------------------------------------------------


def hat_transform(f: Func, iv: Interval) -> Func:
    """x -> f(a + (b - a) x): maps [0,1] onto [a,b]."""
    a, w = iv.a, iv.b - iv.a

    def hat(x: float) -> float:
        return f(a + w * x)

    return hat


def tilde_transform(f: Func, iv: Interval) -> Func:
    """x -> b f(bx) - a f(ax)."""
    a, b = iv.a, iv.b

    def tilde(x: float) -> float:
        return b * f(b * x) - a * f(a * x)

    return tilde


def breve_transform(f: Func, iv: Interval) -> Func:
    """x -> f(bx) - f(ax)."""
    a, b = iv.a, iv.b

    def breve(x: float) -> float:
        return f(b * x) - f(a * x)

    return breve


def product(f: Func, g: Func) -> Func:
    return lambda x: f(x) * g(x)


def checked(f: Func) -> Func:
    """Wrap an arbitrary callable so that failures and non-finite values
    raise :class:`EvalError` like parsed expressions do."""

    def wrapped(x: float) -> float:
        try:
            v = f(x)
        except EvalError:
            raise
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(x, str(exc) or type(exc).__name__) from None
        except OverflowError:
            raise NonFinite(x, "overflow") from None
        if not math.isfinite(v):
            raise NonFinite(x, "non-finite result")
        return v

    return wrapped


# --------------------------------------------------------------------------
# Sampling helpers
# --------------------------------------------------------------------------


def uniform_grid(lo: float, hi: float, n: int = DEFAULT_GRID) -> list[float]:
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    step = (hi - lo) / (n - 1)
    pts = [lo + i * step for i in range(n - 1)]
    pts.append(hi)
    return pts


def lattice_points(lo: float, hi: float, q: float, limit: int = 64) -> list[float]:
    """Points hi * q^k that stay inside [lo, hi] (at most ``limit``)."""
    pts = []
    x = hi
    for _ in range(limit):
        if x < lo:
            break
        pts.append(x)
        x *= q
    return pts


class MonotoneStatus(str, Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class MonotoneResult:
    status: MonotoneStatus
    direction: str
    grid: int
    witness: Optional[float] = None
    error: Optional[EvalError] = None

    @property
    def holds(self) -> bool:
        return self.status is MonotoneStatus.HOLDS


def is_q_monotone(
    f: Func,
    iv: Interval,
    q: float | QParam,
    direction: str = "increasing",
    grid: int = DEFAULT_GRID,
) -> MonotoneResult:
    """Sampled check of f(qx) <= f(x) (increasing) or >= (decreasing) over
    every sampled x with x, qx in [a, b].

    A failure comes with a genuine witness; a pass only covers the samples.
    """
    q = as_q(q)
    if direction not in ("increasing", "decreasing"):
        raise ValueError("direction must be 'increasing' or 'decreasing'")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    lo = min(iv.a / q, iv.b)
    xs = sorted(set(uniform_grid(lo, iv.b, grid)) | set(lattice_points(lo, iv.b, q)))
    sign = 1.0 if direction == "increasing" else -1.0
    for x in xs:
        if q * x < iv.a:
            continue
        try:
            fx, fqx = f(x), f(q * x)
        except EvalError as exc:
            return MonotoneResult(MonotoneStatus.UNDECIDED, direction, grid, x, exc)
        if sign * (fx - fqx) < -1e-12 * max(1.0, abs(fx), abs(fqx)):
            return MonotoneResult(MonotoneStatus.FAILS, direction, grid, x)
    return MonotoneResult(MonotoneStatus.HOLDS, direction, grid)


def tilde_hypothesis_helpers(l: float, L: float, iv: Interval) -> dict[str, bool]:
    """Sufficient conditions for the tilde transform to inherit monotonicity
    (a^2/b^2 <= l/L) and convexity (b l >= a L) from f."""
    if not (l > 0.0 and L > 0.0):
        raise ValueError("l and L must be positive")
    a, b = iv.a, iv.b
    return {
        "increasing_sufficient": a * a / (b * b) <= l / L,
        "convex_sufficient": b * l >= a * L,
    }
