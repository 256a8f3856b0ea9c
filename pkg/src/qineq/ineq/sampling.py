"""Grid-based hypothesis checks and constant estimation.

Everything here is deterministic in its inputs: grids are uniform
(default 256 points) and augmented with the integration nodes that fall
inside the sampled interval.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from typing import Optional

from qineq.core import (
    DEFAULT_GRID,
    Constant,
    Func,
    HypothesisParams,
    Interval,
    Source,
    is_q_monotone,
    lattice_points,
    uniform_grid,
)
from qineq.expr import DomainError
from qineq.ineq.verdict import Hypothesis, HypStatus
from qineq.integrate import IntegralKind, QIntegralSpec

CONVEXITY_RTOL = 1e-10
NODE_LIMIT = 64
ZERO_PROBE = 1e-12
POSITIVE_FLOOR = 1e-9


def integration_nodes(spec: QIntegralSpec, q: float, limit: int = NODE_LIMIT) -> list[float]:
    """Points where the integral of ``spec`` samples f, restricted to E_(J)."""
    b = spec.b
    if spec.kind is IntegralKind.RESTRICTED:
        return [b * q**k for k in range(min(spec.n, limit))]
    if spec.kind is IntegralKind.RIEMANN:
        w = b - spec.a
        return [spec.a + w * q**k for k in range(limit)]
    return lattice_points(spec.a, b, q, limit)


def sample_points(lo: float, hi: float, extra: Sequence[float] = (), grid: int = DEFAULT_GRID) -> list[float]:
    pts = set(uniform_grid(lo, hi, grid))
    pts.update(x for x in extra if lo <= x <= hi)
    return sorted(pts)


def open_at_zero(points: list[float]) -> list[float]:
    """Replace a sample at x = 0 by a probe just inside (0, b].

    Lattice nodes accumulate at 0 but never reach it, so positivity and
    bounds are only required on the half-open interval; the probe still
    exposes infima that tend to 0 there.
    """
    if points and points[0] == 0.0:
        return sorted({ZERO_PROBE * points[-1], *points[1:]})
    return points


def away_from_zero(name: str, key: str, constants: dict[str, Constant]) -> Hypothesis | None:
    """Estimated lower bounds must be positive and not vanish relative to
    the matching upper bound; a violated entry is returned, else None."""
    c = constants[key]
    upper = max((v.value for k, v in constants.items() if k.lower() == key.lower() and k != key), default=1.0)
    floor = POSITIVE_FLOOR * max(1.0, abs(upper)) if c.source is Source.ESTIMATED else 0.0
    if not c.value > floor:
        return Hypothesis(name, HypStatus.VIOLATED, f"{key}={fmt(c.value)} is not bounded away from 0")
    return None


def fmt(x: float) -> str:
    return f"{x:.12g}"


def positive(name: str, f: Func, points: Sequence[float]) -> Hypothesis:
    for x in points:
        if not f(x) > 0.0:
            return Hypothesis(name, HypStatus.VIOLATED, f"value {fmt(f(x))} at x={fmt(x)}", x)
    return Hypothesis(name, HypStatus.SATISFIED, f"sampled {len(points)} points")


def value_range(f: Func, points: Sequence[float]) -> tuple[float, float]:
    vals = [f(x) for x in points]
    return min(vals), max(vals)


def bounded(
    name: str,
    f: Func,
    points: Sequence[float],
    lo_name: str,
    hi_name: str,
    params: HypothesisParams,
    constants: dict[str, Constant],
) -> Hypothesis:
    """``lo <= f <= hi`` on the samples.  Missing bounds are estimated from
    the same samples and recorded in ``constants``."""
    vmin, vmax = value_range(f, points)
    est = []
    for key, val in ((lo_name, vmin), (hi_name, vmax)):
        if key in params:
            constants[key] = params.values[key]
        else:
            constants[key] = Constant(val, Source.ESTIMATED, len(points))
            est.append(key)
    lo, hi = constants[lo_name].value, constants[hi_name].value
    slack = 1e-12 * max(1.0, abs(vmin), abs(vmax))
    for x in points:
        v = f(x)
        if v < lo - slack or v > hi + slack:
            return Hypothesis(
                name, HypStatus.VIOLATED,
                f"value {fmt(v)} at x={fmt(x)} outside [{fmt(lo)}, {fmt(hi)}]", x,
            )
    if est:
        return Hypothesis(name, HypStatus.ESTIMATED, f"{', '.join(est)} estimated from {len(points)} samples")
    return Hypothesis(name, HypStatus.SATISFIED, f"sampled {len(points)} points")


def convex(name: str, f: Func, iv: Interval, grid: int = DEFAULT_GRID) -> Hypothesis:
    """Midpoint convexity on consecutive triples of a uniform grid."""
    xs = uniform_grid(iv.a, iv.b, grid)
    vs = [f(x) for x in xs]
    scale = max(1.0, max(abs(v) for v in vs))
    tol = CONVEXITY_RTOL * scale
    for i in range(1, len(xs) - 1):
        if vs[i - 1] - 2.0 * vs[i] + vs[i + 1] < -tol:
            return Hypothesis(name, HypStatus.VIOLATED, f"midpoint convexity fails at x={fmt(xs[i])}", xs[i])
    return Hypothesis(name, HypStatus.SATISFIED, f"midpoint-convex on {grid}-point grid over [{fmt(iv.a)}, {fmt(iv.b)}]")


def increasing(name: str, f: Func, iv: Interval, grid: int = DEFAULT_GRID) -> Hypothesis:
    xs = uniform_grid(iv.a, iv.b, grid)
    prev = f(xs[0])
    for x in xs[1:]:
        v = f(x)
        if v < prev - 1e-12 * max(1.0, abs(v), abs(prev)):
            return Hypothesis(name, HypStatus.VIOLATED, f"decreases before x={fmt(x)}", x)
        prev = v
    return Hypothesis(name, HypStatus.SATISFIED, f"non-decreasing on {grid}-point grid")


def difference_quotients(f: Func, iv: Interval, grid: int = DEFAULT_GRID) -> tuple[float, float]:
    """Min and max of symmetric difference quotients with step width/1024,
    one-sided at the endpoints."""
    h = (iv.b - iv.a) / 1024.0
    qs = []
    for x in uniform_grid(iv.a, iv.b, grid):
        lo, hi = max(iv.a, x - h), min(iv.b, x + h)
        qs.append((f(hi) - f(lo)) / (hi - lo))
    return min(qs), max(qs)


def q_monotone_pair(name: str, f: Func, g: Func, iv: Interval, q: float, grid: int) -> Hypothesis:
    """Both q-increasing or both q-decreasing on ``iv``."""
    failures = []
    for direction in ("increasing", "decreasing"):
        rf = is_q_monotone(f, iv, q, direction, grid)
        rg = is_q_monotone(g, iv, q, direction, grid)
        for r in (rf, rg):
            if r.error is not None:
                raise r.error
        if rf.holds and rg.holds:
            return Hypothesis(name, HypStatus.SATISFIED, f"both q-{direction} (grid {grid})")
        failures.append(rf.witness if not rf.holds else rg.witness)
    return Hypothesis(name, HypStatus.VIOLATED, "not q-monotone in a common direction", failures[0])


def estimate_or_supplied(
    key: str, params: HypothesisParams, constants: dict[str, Constant], estimate: Callable[[], float], n: int
) -> float:
    if key in params:
        constants[key] = params.values[key]
    else:
        constants[key] = Constant(estimate(), Source.ESTIMATED, n)
    return constants[key].value


def safe_pow(v: float, e: float, point: Optional[float] = None) -> float:
    """Real power for the positive-function inequalities; non-positive bases
    with non-integer exponents are a domain error."""
    if v > 0.0:
        return math.pow(v, e)
    if v == 0.0 and e > 0.0:
        return 0.0
    if v < 0.0 and float(e).is_integer():
        return math.pow(v, e)
    raise DomainError(math.nan if point is None else point, f"power {e!r} of {v!r}")
