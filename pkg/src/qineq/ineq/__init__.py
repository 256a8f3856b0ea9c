"""Inequality checkers and the id -> checker registry."""

from __future__ import annotations

from typing import Optional

from qineq.core import DEFAULT_GRID, ConjugatePair, Func, HypothesisParams, Interval
from qineq.ineq.classical import (
    HH_VARIANTS,
    check_chebyshev,
    check_chebyshev_ab_bounds,
    check_gruss,
    check_gruss_ab,
    check_hermite_hadamard,
    chebyshev_ab_difference,
    gruss_ab_difference,
)
from qineq.ineq.families import (
    JENSEN_IDS,
    LAH_IDS,
    RATIO_IDS,
    YOUNG_IDS,
    check_jensen_power,
    check_lah_ribaric,
    check_ratio_family,
    check_young_family,
    lah_ribaric_coefficients,
)
from qineq.ineq.verdict import (
    Hypothesis,
    HypStatus,
    InequalityId,
    InequalityVerdict,
    KindNotPermitted,
    Side,
    Verdict,
)
from qineq.integrate import DEFAULT_POLICY, IntegralKind, QIntegralSpec, TruncationPolicy

SINGLE_FUNCTION_IDS = frozenset(
    set(HH_VARIANTS) | {InequalityId.SCHWARZ_COR_65, InequalityId.POWER_MEAN_COR_67}
)


def run_check(
    ident: InequalityId | str,
    f: Func,
    g: Optional[Func],
    spec: QIntegralSpec,
    q: float,
    params: HypothesisParams = HypothesisParams(),
    *,
    pair: Optional[ConjugatePair] = None,
    grid: int = DEFAULT_GRID,
    policy: TruncationPolicy = DEFAULT_POLICY,
    enforce_kind: bool = True,
) -> InequalityVerdict:
    """Dispatch to the checker for ``ident``.

    ``params`` carries the bound constants and the exponent ``p``; ``pair``
    the conjugate exponents of the Young family (default alpha = beta = 2).
    With ``enforce_kind=False`` the inequality's formula is evaluated even
    for integral kinds the theorem does not cover.
    """
    ident = InequalityId.parse(ident) if isinstance(ident, str) else ident
    if ident not in SINGLE_FUNCTION_IDS and g is None:
        raise ValueError(f"{ident.value} needs a second function g")
    opts = {"grid": grid, "policy": policy}
    p = params.get("p")

    if ident is InequalityId.CHEBYSHEV_31:
        return check_chebyshev(f, g, spec, q, enforce_kind=enforce_kind, **opts)
    if ident in (InequalityId.CHEBYSHEV_AB_A, InequalityId.CHEBYSHEV_AB_B):
        _require_ab(ident, spec)
        va, vb = check_chebyshev_ab_bounds(f, g, Interval(spec.a, spec.b), q, params, **opts)
        return va if ident is InequalityId.CHEBYSHEV_AB_A else vb
    if ident is InequalityId.GRUSS_41:
        return check_gruss(f, g, spec, q, params, enforce_kind=enforce_kind, **opts)
    if ident is InequalityId.GRUSS_AB_42:
        _require_ab(ident, spec)
        return check_gruss_ab(f, g, Interval(spec.a, spec.b), q, params, **opts)
    if ident in HH_VARIANTS:
        return check_hermite_hadamard(f, spec, q, ident, params, **opts)
    if ident in YOUNG_IDS:
        pair = pair or ConjugatePair(2.0, 2.0)
        return check_young_family(ident, f, g, spec, q, pair, enforce_kind=enforce_kind, **opts)
    if ident in RATIO_IDS:
        return check_ratio_family(ident, f, g, spec, q, params, enforce_kind=enforce_kind, **opts)
    if ident in JENSEN_IDS:
        if p is None:
            raise ValueError(f"{ident.value} needs the exponent p")
        return check_jensen_power(ident, f, g, spec, q, p, enforce_kind=enforce_kind, **opts)
    if ident in LAH_IDS:
        if p is None:
            p = 2.0
        return check_lah_ribaric(f, g, spec, q, p, params, ident=ident, enforce_kind=enforce_kind, **opts)
    raise AssertionError(f"no checker for {ident}")  # pragma: no cover


AB_IDS = frozenset({InequalityId.CHEBYSHEV_AB_A, InequalityId.CHEBYSHEV_AB_B, InequalityId.GRUSS_AB_42})


def default_kind(ident: InequalityId) -> IntegralKind:
    """The integral kind a checker uses when none is requested."""
    if ident in HH_VARIANTS:
        return HH_VARIANTS[ident]
    if ident in AB_IDS:
        return IntegralKind.JACKSON_AB
    return IntegralKind.JACKSON0


def _require_ab(ident: InequalityId, spec: QIntegralSpec) -> None:
    if spec.kind is not IntegralKind.JACKSON_AB:
        raise KindNotPermitted(f"{ident.value} is stated for the jackson-ab integral only")


__all__ = [
    "Hypothesis",
    "HypStatus",
    "InequalityId",
    "InequalityVerdict",
    "KindNotPermitted",
    "SINGLE_FUNCTION_IDS",
    "Side",
    "Verdict",
    "check_chebyshev",
    "check_chebyshev_ab_bounds",
    "check_gruss",
    "check_gruss_ab",
    "check_hermite_hadamard",
    "check_jensen_power",
    "check_lah_ribaric",
    "check_ratio_family",
    "check_young_family",
    "chebyshev_ab_difference",
    "default_kind",
    "gruss_ab_difference",
    "lah_ribaric_coefficients",
    "run_check",
]
