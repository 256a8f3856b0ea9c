"""q-analogues of the Chebyshev, Grüss and Hermite–Hadamard inequalities."""

from __future__ import annotations

from typing import Optional

from qineq.core import (
    DEFAULT_GRID,
    Constant,
    Func,
    HypothesisParams,
    Interval,
    Source,
    as_q,
    hat_transform,
    lattice_points,
    product,
    q_bracket,
    tilde_transform,
)
from qineq.ineq.common import Context, assemble, base_inputs, require_kind
from qineq.ineq.sampling import (
    bounded,
    convex,
    difference_quotients,
    fmt,
    increasing,
    q_monotone_pair,
    sample_points,
)
from qineq.ineq.verdict import (
    Hypothesis,
    HypStatus,
    InequalityId,
    InequalityVerdict,
    KindNotPermitted,
    Side,
    tolerance_for,
)
from qineq.integrate import (
    DEFAULT_POLICY,
    IntegralKind,
    QIntegralSpec,
    TruncationPolicy,
    qint,
)

NO_PARAMS = HypothesisParams()


# --------------------------------------------------------------------------
# Chebyshev
# --------------------------------------------------------------------------


def check_chebyshev(
    f: Func,
    g: Func,
    spec: QIntegralSpec,
    q: float,
    *,
    grid: int = DEFAULT_GRID,
    policy: TruncationPolicy = DEFAULT_POLICY,
    enforce_kind: bool = True,
) -> InequalityVerdict:
    """J(fg) >= J(f) J(g) / (b - a_J) for f, g q-monotone in the same direction.

    With ``enforce_kind=False`` the same form is evaluated for the
    ``jackson-ab`` kind, where it is known to fail; used by the
    counterexample search.
    """
    ident = InequalityId.CHEBYSHEV_31
    q = as_q(q)
    require_kind(ident, spec, enforce_kind)
    ctx = Context(spec, q, policy, grid)

    def hypotheses(constants):
        out = [q_monotone_pair("q_monotone_same_direction", f, g, ctx.domain, q, grid)]
        if spec.kind is IntegralKind.RIEMANN:
            # the nodes a + (b-a) q^k are ordered along the hat functions' lattice
            out.append(
                q_monotone_pair(
                    "hat_q_monotone_same_direction",
                    hat_transform(f, ctx.domain),
                    hat_transform(g, ctx.domain),
                    Interval(0.0, 1.0),
                    q,
                    grid,
                )
            )
        return out

    def sides(constants):
        fg = ctx.J(product(f, g))
        return [Side("chebyshev", fg, ctx.J(f) * ctx.J(g) / ctx.width, ">=")]

    return assemble(ident, spec, q, base_inputs(spec, q, f, g), hypotheses, sides)


def chebyshev_ab_difference(
    f: Func, g: Func, iv: Interval, q: float, policy: TruncationPolicy = DEFAULT_POLICY
) -> float:
    """I_q(fg; a, b) - I_q(f; a, b) I_q(g; a, b) / (b - a)."""
    iv.require_positive_a()
    spec = QIntegralSpec.jackson_ab(iv.a, iv.b)
    fg = qint(product(f, g), spec, q, policy)
    return fg - qint(f, spec, q, policy) * qint(g, spec, q, policy) / iv.width


def _slope_band(
    which: str, h: Func, iv0: Interval, a: float, b: float, params, constants, grid: int
) -> list[Hypothesis]:
    lo_key, hi_key = f"l_{which}", f"L_{which}"
    dq_min, dq_max = difference_quotients(h, iv0, grid)
    out = []
    for key, val in ((lo_key, dq_min), (hi_key, dq_max)):
        constants[key] = params.values[key] if key in params else Constant(val, Source.ESTIMATED, grid)
    lo, hi = constants[lo_key].value, constants[hi_key].value
    name = f"slope_band_{which}"
    if lo_key in params or hi_key in params:
        tol = 1e-9 * max(1.0, abs(dq_min), abs(dq_max))
        if dq_min < lo - tol or dq_max > hi + tol:
            out.append(Hypothesis(
                name, HypStatus.VIOLATED,
                f"sampled difference quotients span [{fmt(dq_min)}, {fmt(dq_max)}], outside [{fmt(lo)}, {fmt(hi)}]",
            ))
        else:
            out.append(Hypothesis(name, HypStatus.SATISFIED, f"difference quotients within [{fmt(lo)}, {fmt(hi)}]"))
    else:
        out.append(Hypothesis(name, HypStatus.ESTIMATED, f"{lo_key}, {hi_key} from {grid}-point difference quotients"))
    ratio = a * a / (b * b)
    name = f"endpoint_ratio_{which}"
    if not (lo > 0.0 and hi > 0.0):
        out.append(Hypothesis(name, HypStatus.VIOLATED, f"{lo_key}={fmt(lo)}, {hi_key}={fmt(hi)} must be positive"))
    elif ratio > lo / hi:
        out.append(Hypothesis(name, HypStatus.VIOLATED, f"a^2/b^2={fmt(ratio)} > {lo_key}/{hi_key}={fmt(lo / hi)}"))
    else:
        out.append(Hypothesis(name, HypStatus.SATISFIED, f"a^2/b^2={fmt(ratio)} <= {fmt(lo / hi)}"))
    return out


def check_chebyshev_ab_bounds(
    f: Func,
    g: Func,
    iv: Interval,
    q: float,
    params: HypothesisParams = NO_PARAMS,
    *,
    grid: int = DEFAULT_GRID,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> tuple[InequalityVerdict, InequalityVerdict]:
    """The two corrected Chebyshev bounds for I_q(.; a, b) with f, g
    increasing on [0, b] and slope bands [l, L]:

    (a) correction ab(b-a) L_f L_g / [3]_q
    (b) correction ab (f(b)-f(0)) (g(b)-g(0)) / (b-a)
    """
    q = as_q(q)
    a, b = iv.a, iv.b
    spec = QIntegralSpec.jackson_ab(a, b)
    iv0 = Interval(0.0, b)
    ctx = Context(spec, q, policy, grid)
    inputs = base_inputs(spec, q, f, g)

    def hypotheses(constants):
        out = [increasing("f_increasing_on_0_b", f, iv0, grid), increasing("g_increasing_on_0_b", g, iv0, grid)]
        out += _slope_band("f", f, iv0, a, b, params, constants, grid)
        out += _slope_band("g", g, iv0, a, b, params, constants, grid)
        return out

    def base():
        fg = ctx.J(product(f, g))
        return fg, ctx.J(f) * ctx.J(g) / (b - a)

    def sides_a(constants):
        fg, prod = base()
        corr = a * b * (b - a) / q_bracket(3, q) * constants["L_f"].value * constants["L_g"].value
        return [Side("bound_a", fg, prod - corr, ">=")]

    def sides_b(constants):
        fg, prod = base()
        corr = a * b / (b - a) * (f(b) - f(0.0)) * (g(b) - g(0.0))
        return [Side("bound_b", fg, prod - corr, ">=")]

    va = assemble(InequalityId.CHEBYSHEV_AB_A, spec, q, inputs, hypotheses, sides_a)
    vb = assemble(InequalityId.CHEBYSHEV_AB_B, spec, q, inputs, hypotheses, sides_b)
    return va, vb


# --------------------------------------------------------------------------
# Grüss
# --------------------------------------------------------------------------


def check_gruss(
    f: Func,
    g: Func,
    spec: QIntegralSpec,
    q: float,
    params: HypothesisParams = NO_PARAMS,
    *,
    grid: int = DEFAULT_GRID,
    policy: TruncationPolicy = DEFAULT_POLICY,
    enforce_kind: bool = True,
) -> InequalityVerdict:
    """|J(fg)/w - J(f)J(g)/w^2| <= (M - m)(Phi - phi)/4 with w = b - a_J and
    m <= f <= M, phi <= g <= Phi on E_(J)."""
    ident = InequalityId.GRUSS_41
    q = as_q(q)
    require_kind(ident, spec, enforce_kind)
    ctx = Context(spec, q, policy, grid)

    def hypotheses(constants):
        return [
            bounded("f_bounds", f, ctx.points, "m", "M", params, constants),
            bounded("g_bounds", g, ctx.points, "phi", "Phi", params, constants),
        ]

    def sides(constants):
        w = ctx.width
        lhs = abs(ctx.J(product(f, g)) / w - ctx.J(f) * ctx.J(g) / (w * w))
        c = {k: v.value for k, v in constants.items()}
        return [Side("gruss", lhs, 0.25 * (c["M"] - c["m"]) * (c["Phi"] - c["phi"]), "<=")]

    return assemble(ident, spec, q, base_inputs(spec, q, f, g), hypotheses, sides)


def gruss_ab_difference(
    f: Func, g: Func, iv: Interval, q: float, policy: TruncationPolicy = DEFAULT_POLICY
) -> float:
    """I_q(fg; a, b) - I_q(f; a, b) I_q(g; a, b), reported raw."""
    iv.require_positive_a()
    spec = QIntegralSpec.jackson_ab(iv.a, iv.b)
    return qint(product(f, g), spec, q, policy) - qint(f, spec, q, policy) * qint(g, spec, q, policy)


def check_gruss_ab(
    f: Func,
    g: Func,
    iv: Interval,
    q: float,
    params: HypothesisParams = NO_PARAMS,
    *,
    grid: int = DEFAULT_GRID,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> InequalityVerdict:
    """Grüss bound for I_q(.; a, b), inflated by 1 + 4ab/(b-a)^2; the bounds
    must hold on all of [0, b]."""
    ident = InequalityId.GRUSS_AB_42
    q = as_q(q)
    a, b = iv.a, iv.b
    spec = QIntegralSpec.jackson_ab(a, b)
    ctx = Context(spec, q, policy, grid)
    extra = lattice_points(0.0, b, q) + ([x * a / b for x in lattice_points(0.0, b, q)] if a > 0 else [])
    points = sample_points(0.0, b, extra, grid)

    def hypotheses(constants):
        return [
            bounded("f_bounds_on_0_b", f, points, "m", "M", params, constants),
            bounded("g_bounds_on_0_b", g, points, "phi", "Phi", params, constants),
        ]

    def sides(constants):
        w = b - a
        lhs = abs(ctx.J(product(f, g)) / w - ctx.J(f) * ctx.J(g) / (w * w))
        c = {k: v.value for k, v in constants.items()}
        rhs = 0.25 * (c["M"] - c["m"]) * (c["Phi"] - c["phi"]) * (1.0 + 4.0 * a * b / (w * w))
        return [Side("gruss_ab", lhs, rhs, "<=")]

    return assemble(ident, spec, q, base_inputs(spec, q, f, g), hypotheses, sides)


# --------------------------------------------------------------------------
# Hermite–Hadamard
# --------------------------------------------------------------------------

HH_VARIANTS = {
    InequalityId.HH_RESTRICTED_51: IntegralKind.RESTRICTED,
    InequalityId.HH_JACKSON0_52: IntegralKind.JACKSON0,
    InequalityId.HH_RIEMANN_53: IntegralKind.RIEMANN,
    InequalityId.HH_JACKSON_AB_55: IntegralKind.JACKSON_AB,
    InequalityId.HH_COR_56: IntegralKind.JACKSON_AB,
}

_DEFAULT_VARIANT = {
    IntegralKind.RESTRICTED: InequalityId.HH_RESTRICTED_51,
    IntegralKind.JACKSON0: InequalityId.HH_JACKSON0_52,
    IntegralKind.RIEMANN: InequalityId.HH_RIEMANN_53,
    IntegralKind.JACKSON_AB: InequalityId.HH_JACKSON_AB_55,
}


def _tilde_constants_entry(params: HypothesisParams, a: float, b: float) -> Hypothesis:
    name = "tilde_convexity_constants"
    if "l" in params and "L" in params:
        l, L = params.get("l"), params.get("L")
        if not (l > 0.0 and L > 0.0):
            return Hypothesis(name, HypStatus.VIOLATED, f"l={fmt(l)}, L={fmt(L)} must be positive")
        if b * l < a * L:
            return Hypothesis(name, HypStatus.VIOLATED, f"b l = {fmt(b * l)} < a L = {fmt(a * L)}")
        return Hypothesis(name, HypStatus.SATISFIED, f"b l = {fmt(b * l)} >= a L = {fmt(a * L)}")
    return Hypothesis(
        name, HypStatus.ESTIMATED,
        "l, L not supplied; their role (convexity of tilde f) is verified directly by tilde_convex",
    )


def check_hermite_hadamard(
    f: Func,
    spec: QIntegralSpec,
    q: float,
    variant: Optional[InequalityId] = None,
    params: HypothesisParams = NO_PARAMS,
    *,
    claimed_a: Optional[float] = None,
    grid: int = DEFAULT_GRID,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> InequalityVerdict:
    """Two-sided q-Hermite–Hadamard bound for a convex f.

    The variant follows the integral kind unless given explicitly
    (``HH_COR_56`` must be requested).  Sides are reported as
    ``lower <= mean`` and ``mean <= upper``.
    """
    q = as_q(q)
    variant = _DEFAULT_VARIANT[spec.kind] if variant is None else InequalityId(variant)
    if HH_VARIANTS.get(variant) is not spec.kind:
        raise KindNotPermitted(f"{variant.value} does not apply to the {spec.kind.value} integral")
    br2 = q_bracket(2, q)
    b = spec.b
    a = spec.lower(q)
    if claimed_a is not None and spec.kind is IntegralKind.RESTRICTED:
        if abs(claimed_a - a) > 1e-12 * max(abs(a), abs(claimed_a)):
            raise ValueError(f"restricted integral has a = b q^n = {a!r}, not {claimed_a!r}")
    ctx = Context(spec, q, policy, grid)
    iv = Interval(a, b)
    inputs = base_inputs(spec, q, f)

    if variant is InequalityId.HH_RESTRICTED_51:
        def hypotheses(constants):
            return [convex("convex_on_a_b", f, iv, grid)]

        def sides(constants):
            mean = ctx.J(f) / (b - a)
            a_over_q = b * q ** (spec.n - 1)
            return [
                Side("lower", f((a + b) / br2), mean, "<="),
                Side("upper", mean, (q * f(a_over_q) + f(b)) / br2, "<="),
            ]

    elif variant is InequalityId.HH_JACKSON0_52:
        def hypotheses(constants):
            return [convex("convex_on_0_b", f, Interval(0.0, b), grid)]

        def sides(constants):
            mean = ctx.J(f) / b
            return [
                Side("lower", f(b / br2), mean, "<="),
                Side("upper", mean, (q * f(0.0) + f(b)) / br2, "<="),
            ]

    elif variant is InequalityId.HH_RIEMANN_53:
        def hypotheses(constants):
            return [convex("convex_on_a_b", f, iv, grid)]

        def sides(constants):
            mean = ctx.J(f) / (b - a)
            return [
                Side("lower", f((a * q + b) / br2), mean, "<="),
                Side("upper", mean, (q * f(a) + f(b)) / br2, "<="),
            ]

    elif variant is InequalityId.HH_JACKSON_AB_55:
        def hypotheses(constants):
            for key in ("l", "L"):
                if key in params:
                    constants[key] = params.values[key]
            return [
                convex("convex_on_0_b", f, Interval(0.0, b), grid),
                convex("tilde_convex", tilde_transform(f, iv), Interval(0.0, 1.0), grid),
                _tilde_constants_entry(params, a, b),
            ]

        def sides(constants):
            integral = ctx.J(f)
            return [
                Side("lower", b * f(b / br2) - a * f(a / br2), integral, "<="),
                Side("upper", integral, ((b - a) * q * f(0.0) + b * f(b) - a * f(a)) / br2, "<="),
            ]

    else:  # HH_COR_56
        def gaps():
            w = b - a
            low = (b * f(b / br2) - a * f(a / br2)) / w - f((a + b) / br2)
            high = (b * f(b) - a * f(a)) / w - f(a + b)
            return low, high

        def hypotheses(constants):
            low, high = gaps()
            for key, val in (("l", low), ("L", high)):
                constants[key] = params.values[key] if key in params else Constant(val, Source.ESTIMATED, 1)
            l, L = constants["l"].value, constants["L"].value
            out = [
                convex("convex_on_0_a_plus_b", f, Interval(0.0, a + b), grid),
                convex("tilde_convex", tilde_transform(f, iv), Interval(0.0, 1.0), grid),
            ]
            name = "condition_5_10_band"
            tol = tolerance_for(low, high)
            if low < l - tol or high > L + tol:
                out.append(Hypothesis(
                    name, HypStatus.VIOLATED,
                    f"gaps ({fmt(low)}, {fmt(high)}) at the corollary's points not within l={fmt(l)}, L={fmt(L)}",
                ))
            elif "l" in params and "L" in params:
                out.append(Hypothesis(name, HypStatus.SATISFIED, f"l={fmt(l)} <= {fmt(low)}, {fmt(high)} <= L={fmt(L)}"))
            else:
                out.append(Hypothesis(name, HypStatus.ESTIMATED, "l, L set to the gaps at the corollary's points"))
            return out

        def sides(constants):
            mean = ctx.J(f) / (b - a)
            l, L = constants["l"].value, constants["L"].value
            return [
                Side("lower", l + f((a + b) / br2), mean, "<="),
                Side("upper", mean, (q * f(0.0) + f(a + b) + L) / br2, "<="),
            ]

    return assemble(variant, spec, q, inputs, hypotheses, sides)
