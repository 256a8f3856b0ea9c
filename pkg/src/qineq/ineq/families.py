"""Young, Cassels, Jensen-power and Lah–Ribarić type inequalities for the
q-integrals that are positive weighted sums over nodes inside E_(J):
jackson0, restricted and riemann.
"""

from __future__ import annotations

import math
from typing import Optional

from qineq.core import (
    DEFAULT_GRID,
    Constant,
    ConjugatePair,
    Func,
    HypothesisParams,
    as_q,
)
from qineq.ineq.common import Context, assemble, base_inputs, require_kind
from qineq.ineq.sampling import away_from_zero, bounded, fmt, positive, safe_pow
from qineq.ineq.verdict import (
    Hypothesis,
    HypStatus,
    InequalityId,
    InequalityVerdict,
    Side,
)
from qineq.integrate import DEFAULT_POLICY, QIntegralSpec, TruncationPolicy

NO_PARAMS = HypothesisParams()
DEGENERATE_RATIO_TOL = 1e-12

YOUNG_IDS = frozenset({
    InequalityId.YOUNG_61_I, InequalityId.YOUNG_61_II, InequalityId.YOUNG_61_III, InequalityId.YOUNG_61_IV,
    InequalityId.YOUNG_62_I, InequalityId.YOUNG_62_II, InequalityId.YOUNG_62_III,
})  # fmt: skip
RATIO_IDS = frozenset({
    InequalityId.CASSELS_63_I, InequalityId.CASSELS_63_II, InequalityId.CASSELS_63_III,
    InequalityId.BOUNDED_64_I, InequalityId.BOUNDED_64_II, InequalityId.BOUNDED_64_III,
    InequalityId.SCHWARZ_COR_65,
})  # fmt: skip
JENSEN_IDS = frozenset({InequalityId.JENSEN_POWER_66, InequalityId.POWER_MEAN_COR_67})
LAH_IDS = frozenset({InequalityId.LAH_RIBARIC_68, InequalityId.LAH_RIBARIC_68_P2})


def _abs_pow(f: Func, e: float) -> Func:
    if e == 1.0:
        return lambda x: abs(f(x))
    return lambda x: safe_pow(abs(f(x)), e, x)


def _mono(f: Func, ef: float, g: Func, eg: float) -> Func:
    """x -> |f(x)|^ef |g(x)|^eg."""
    fa, ga = _abs_pow(f, ef), _abs_pow(g, eg)
    return lambda x: fa(x) * ga(x)


def _pos_mono(f: Func, ef: float, g: Optional[Func] = None, eg: float = 0.0) -> Func:
    """x -> f(x)^ef g(x)^eg for positive f, g (domain error otherwise)."""
    if g is None:
        return lambda x: safe_pow(f(x), ef, x)
    return lambda x: safe_pow(f(x), ef, x) * safe_pow(g(x), eg, x)


def check_young_family(
    ident: InequalityId,
    f: Func,
    g: Func,
    spec: QIntegralSpec,
    q: float,
    pair: ConjugatePair,
    *,
    grid: int = DEFAULT_GRID,
    policy: TruncationPolicy = DEFAULT_POLICY,
    enforce_kind: bool = True,
) -> InequalityVerdict:
    """Inequalities obtained from Young's inequality with conjugate exponents
    (alpha, beta).  All integrands use |f|, |g|."""
    ident = InequalityId(ident)
    if ident not in YOUNG_IDS:
        raise ValueError(f"{ident.value} is not a Young-family inequality")
    q = as_q(q)
    require_kind(ident, spec, enforce_kind)
    ctx = Context(spec, q, policy, grid)
    al, be = pair.alpha, pair.beta
    J = ctx.J

    def hypotheses(constants):
        return [Hypothesis("conjugate_exponents", HypStatus.SATISFIED, f"alpha={fmt(al)}, beta={fmt(be)}")]

    def sides(constants):
        F = lambda e: _abs_pow(f, e)  # noqa: E731
        G = lambda e: _abs_pow(g, e)  # noqa: E731
        if ident is InequalityId.YOUNG_61_I:
            lhs = J(F(al)) / al + J(G(be)) / be
            rhs = J(F(1.0)) * J(G(1.0)) / ctx.width
        elif ident is InequalityId.YOUNG_61_II:
            lhs = J(F(al)) * J(G(al)) / al + J(F(be)) * J(G(be)) / be
            rhs = J(_mono(f, 1.0, g, 1.0)) ** 2
        elif ident is InequalityId.YOUNG_61_III:
            lhs = J(F(al)) * J(G(be)) / al + J(F(be)) * J(G(al)) / be
            rhs = J(_mono(f, 1.0, g, al - 1.0)) * J(_mono(f, 1.0, g, be - 1.0))
        elif ident is InequalityId.YOUNG_61_IV:
            lhs = J(F(al)) * J(G(be))
            rhs = J(_mono(f, 1.0, g, 1.0)) * J(_mono(f, al - 1.0, g, be - 1.0))
        elif ident is InequalityId.YOUNG_62_I:
            lhs = J(F(al)) * J(G(2.0)) / al + J(F(2.0)) * J(G(be)) / be
            rhs = J(_mono(f, 1.0, g, 1.0)) * J(_mono(f, 2.0 / be, g, 2.0 / al))
        elif ident is InequalityId.YOUNG_62_II:
            lhs = J(F(2.0)) * J(G(be)) / al + J(F(al)) * J(G(2.0)) / be
            rhs = J(_mono(f, 2.0 / al, g, 2.0 / be)) * J(_mono(f, al - 1.0, g, be - 1.0))
        else:
            ga, gb = G(al), G(be)
            lhs = J(F(2.0)) * J(lambda x: ga(x) / al + gb(x) / be)
            rhs = J(_mono(f, 2.0 / al, g, 1.0)) * J(_mono(f, 2.0 / be, g, 1.0))
        return [Side(ident.value.lower(), lhs, rhs, ">=")]

    inputs = base_inputs(spec, q, f, g, alpha=al, beta=be)
    return assemble(ident, spec, q, inputs, hypotheses, sides)


def _ratio(f: Func, g: Func) -> Func:
    return lambda x: f(x) / g(x)


def check_ratio_family(
    ident: InequalityId,
    f: Func,
    g: Optional[Func],
    spec: QIntegralSpec,
    q: float,
    params: HypothesisParams = NO_PARAMS,
    *,
    grid: int = DEFAULT_GRID,
    policy: TruncationPolicy = DEFAULT_POLICY,
    enforce_kind: bool = True,
) -> InequalityVerdict:
    """Reverse Cauchy–Schwarz bounds for positive functions.

    63_*: m, M bound f/g on E_(J); 64_*: c <= f <= C, d <= g <= D;
    65: c <= f <= C, single function.
    """
    ident = InequalityId(ident)
    if ident not in RATIO_IDS:
        raise ValueError(f"{ident.value} is not a Cassels-type inequality")
    single = ident is InequalityId.SCHWARZ_COR_65
    if not single and g is None:
        raise ValueError(f"{ident.value} needs two functions")
    q = as_q(q)
    require_kind(ident, spec, enforce_kind)
    ctx = Context(spec, q, policy, grid)
    pts = ctx.points
    J = ctx.J
    family = ident.value.split("_")[0]

    def hypotheses(constants):
        out = [positive("f_positive", f, pts)]
        if not single:
            out.append(positive("g_positive", g, pts))
        if not all(h.ok for h in out):
            return out
        if family == "CASSELS":
            out.append(bounded("ratio_bounds", _ratio(f, g), pts, "m", "M", params, constants))
            lows = ["m"]
        else:
            out.append(bounded("f_bounds", f, pts, "c", "C", params, constants))
            lows = ["c"]
            if not single:
                out.append(bounded("g_bounds", g, pts, "d", "D", params, constants))
                lows.append("d")
        for key in lows:
            bad = away_from_zero(f"{key}_positive", key, constants)
            if bad is not None:
                out.append(bad)
        return out

    def sides(constants):
        c = {k: v.value for k, v in constants.items()}
        if single:
            lo, hi = c["c"], c["C"]
            lhs = J(_pos_mono(f, 2.0))
            rhs = (lo + hi) ** 2 / (4.0 * lo * hi * ctx.width) * J(f) ** 2
            return [Side("schwarz_cor", lhs, rhs, "<=")]
        if family == "CASSELS":
            lo, hi = c["m"], c["M"]
        else:
            lo, hi = c["c"] * c["d"], c["C"] * c["D"]
        ff, gg = J(_pos_mono(f, 2.0)), J(_pos_mono(g, 2.0))
        fg = J(lambda x: f(x) * g(x))
        part = ident.value.rsplit("_", 1)[1]
        if part == "I":
            x = ff * gg
            bound = (lo + hi) ** 2 / (4.0 * lo * hi) * fg**2
        elif part == "II":
            x = math.sqrt(ff * gg) - fg
            bound = (math.sqrt(hi) - math.sqrt(lo)) ** 2 / (2.0 * math.sqrt(lo * hi)) * fg
        else:
            x = ff * gg - fg**2
            bound = (hi - lo) ** 2 / (4.0 * lo * hi) * fg**2
        return [Side("nonnegative", 0.0, x, "<="), Side("upper", x, bound, "<=")]

    inputs = base_inputs(spec, q, f, None if single else g)
    return assemble(ident, spec, q, inputs, hypotheses, sides)


def _relation(p: float) -> str:
    """'<=' where t -> t^p is convex (p outside (0, 1)), '>=' where concave."""
    return ">=" if 0.0 < p < 1.0 else "<="


def check_jensen_power(
    ident: InequalityId,
    f: Func,
    g: Optional[Func],
    spec: QIntegralSpec,
    q: float,
    p: float,
    *,
    grid: int = DEFAULT_GRID,
    policy: TruncationPolicy = DEFAULT_POLICY,
    enforce_kind: bool = True,
) -> InequalityVerdict:
    """66: (J(fg))^p vs (J(f^2))^(p-1) J(f^(2-p) g^p);
    67: (J(f))^p vs (b - a_J)^(p-1) J(f^p).
    '<=' for p outside (0, 1), reversed inside."""
    ident = InequalityId(ident)
    if ident not in JENSEN_IDS:
        raise ValueError(f"{ident.value} is not a Jensen-power inequality")
    if p == 0.0 or not math.isfinite(p):
        raise ValueError("p must be a non-zero real")
    cor = ident is InequalityId.POWER_MEAN_COR_67
    if not cor and g is None:
        raise ValueError(f"{ident.value} needs two functions")
    q = as_q(q)
    require_kind(ident, spec, enforce_kind)
    ctx = Context(spec, q, policy, grid)
    J = ctx.J

    def hypotheses(constants):
        constants["p"] = Constant(p)
        out = [positive("f_positive", f, ctx.points)]
        if not cor:
            out.append(positive("g_positive", g, ctx.points))
        return out

    def sides(constants):
        if cor:
            lhs = safe_pow(J(f), p)
            rhs = ctx.width ** (p - 1.0) * J(_pos_mono(f, p))
        else:
            lhs = safe_pow(J(lambda x: f(x) * g(x)), p)
            rhs = safe_pow(J(_pos_mono(f, 2.0)), p - 1.0) * J(_pos_mono(f, 2.0 - p, g, p))
        return [Side(ident.value.lower(), lhs, rhs, _relation(p))]

    inputs = base_inputs(spec, q, f, None if cor else g, p=p)
    return assemble(ident, spec, q, inputs, hypotheses, sides)


def lah_ribaric_coefficients(m: float, M: float, p: float) -> tuple[float, float]:
    """(A, B) with A = (M^p - m^p)/(M - m), B = mM(M^(p-1) - m^(p-1))/(M - m);
    the m = M limits are p m^(p-1) and (p-1) m^p."""
    if abs(M - m) <= DEGENERATE_RATIO_TOL * max(1.0, abs(m)):
        return p * m ** (p - 1.0), (p - 1.0) * m**p
    return (M**p - m**p) / (M - m), m * M * (M ** (p - 1.0) - m ** (p - 1.0)) / (M - m)


def check_lah_ribaric(
    f: Func,
    g: Func,
    spec: QIntegralSpec,
    q: float,
    p: float = 2.0,
    params: HypothesisParams = NO_PARAMS,
    *,
    ident: InequalityId = InequalityId.LAH_RIBARIC_68,
    grid: int = DEFAULT_GRID,
    policy: TruncationPolicy = DEFAULT_POLICY,
    enforce_kind: bool = True,
) -> InequalityVerdict:
    """J(f^(2-p) g^p) + B J(f^2) <= A J(fg) with m <= g/f <= M (reversed for
    p in (0, 1)); A, B from :func:`lah_ribaric_coefficients`.

    ``LAH_RIBARIC_68_P2`` is the p = 2 case J(g^2) + mM J(f^2) <= (M + m) J(fg).
    """
    ident = InequalityId(ident)
    if ident not in LAH_IDS:
        raise ValueError(f"{ident.value} is not a Lah–Ribarić inequality")
    if ident is InequalityId.LAH_RIBARIC_68_P2:
        if p != 2.0:
            raise ValueError("LAH_RIBARIC_68_P2 is the p = 2 case")
    if p == 0.0 or not math.isfinite(p):
        raise ValueError("p must be a non-zero real")
    q = as_q(q)
    require_kind(ident, spec, enforce_kind)
    ctx = Context(spec, q, policy, grid)
    J = ctx.J

    def hypotheses(constants):
        constants["p"] = Constant(p)
        out = [positive("f_positive", f, ctx.points), positive("g_positive", g, ctx.points)]
        if not all(h.ok for h in out):
            return out
        out.append(bounded("ratio_bounds", _ratio(g, f), ctx.points, "m", "M", params, constants))
        bad = away_from_zero("m_positive", "m", constants)
        if bad is not None:
            out.append(bad)
        return out

    def sides(constants):
        m, M = constants["m"].value, constants["M"].value
        ff = J(_pos_mono(f, 2.0))
        fg = J(lambda x: f(x) * g(x))
        if ident is InequalityId.LAH_RIBARIC_68_P2:
            lhs = J(_pos_mono(g, 2.0)) + m * M * ff
            rhs = (M + m) * fg
        else:
            A, B = lah_ribaric_coefficients(m, M, p)
            lhs = J(_pos_mono(f, 2.0 - p, g, p)) + B * ff
            rhs = A * fg
        return [Side(ident.value.lower(), lhs, rhs, _relation(p))]

    inputs = base_inputs(spec, q, f, g, p=p)
    return assemble(ident, spec, q, inputs, hypotheses, sides)


__all__ = [
    "JENSEN_IDS",
    "LAH_IDS",
    "RATIO_IDS",
    "YOUNG_IDS",
    "check_jensen_power",
    "check_lah_ribaric",
    "check_ratio_family",
    "check_young_family",
    "lah_ribaric_coefficients",
]
