import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qineq.core import ConjugatePair, HypothesisParams, Interval, q_bracket, tilde_hypothesis_helpers
from qineq.expr import parse
from qineq.ineq import (
    HypStatus,
    InequalityId,
    KindNotPermitted,
    Verdict,
    check_chebyshev,
    chebyshev_ab_difference,
    default_kind,
    gruss_ab_difference,
    lah_ribaric_coefficients,
    run_check,
)
from qineq.integrate import IntegralKind, QIntegralSpec, qint
from qineq.properties import catalog_function

S = QIntegralSpec
J01 = S.jackson0(1.0)
AB12 = S.jackson_ab(1.0, 2.0)
x, x2, one = parse("x"), parse("x^2"), parse("1")
P = HypothesisParams.of


def check(ident, f, g, spec, q, **kw):
    pair = kw.pop("pair", None)
    return run_check(ident, parse(f), None if g is None else parse(g), spec, q, P(**kw), pair=pair)


def b(n, q):
    return q_bracket(n, q)


class TestRegistry:
    @pytest.mark.parametrize("ident", list(InequalityId))
    def test_every_id_has_a_checker(self, ident):
        kind = default_kind(ident)
        if kind is IntegralKind.JACKSON_AB:
            spec = AB12
        elif kind is IntegralKind.RESTRICTED:
            spec = S.restricted(1.0, 3)
        elif kind is IntegralKind.RIEMANN:
            spec = S.riemann(1.0, 2.0)
        else:
            spec = J01 if ident is not InequalityId.HH_COR_56 else AB12
        v = run_check(ident, parse("x + 1"), parse("x + 2"), spec, 0.5, P(p=2.0))
        assert v.id is ident
        assert v.hypotheses, "every checker reports its hypotheses"
        assert v.verdict in set(Verdict)

    def test_parse_id(self):
        assert InequalityId.parse(" young_61_iii ") is InequalityId.YOUNG_61_III
        with pytest.raises(ValueError):
            InequalityId.parse("NOPE")

    def test_second_function_required(self):
        with pytest.raises(ValueError):
            run_check("CHEBYSHEV_31", x, None, J01, 0.5)

    def test_verdict_dict_is_json_ready(self):
        d = check("GRUSS_41", "x", "x^2", J01, 0.5).as_dict()
        assert d["verdict"] == "HOLDS"
        assert {"id", "integral_kind", "hypotheses", "lhs", "rhs", "slack", "tolerance"} <= d.keys()


class TestChebyshev:
    def test_identity_pair(self):
        v = check_chebyshev(x, x, J01, 0.5)
        assert v.verdict is Verdict.HOLDS
        assert v.lhs == pytest.approx(1 / b(3, 0.5), rel=1e-12)
        assert v.rhs == pytest.approx(1 / b(2, 0.5) ** 2, rel=1e-12)
        assert v.slack == pytest.approx(0.126984, abs=1e-6)

    def test_ab_kind_refused(self):
        with pytest.raises(KindNotPermitted):
            check_chebyshev(parse("x^3"), parse("x^4"), AB12, 0.25)

    def test_constant_equality_riemann(self):
        v = check_chebyshev(one, one, S.riemann(1.0, 2.0), 0.7)
        assert v.verdict is Verdict.HOLDS
        assert v.lhs == pytest.approx(1.0) and v.rhs == pytest.approx(1.0)
        assert abs(v.slack) <= v.tolerance

    def test_opposite_monotonicity_is_vacuous(self):
        v = check("CHEBYSHEV_31", "x", "-x", J01, 0.5)
        assert v.verdict is Verdict.VACUOUS
        assert v.hypothesis("q_monotone_same_direction").status is HypStatus.VIOLATED


def cheb_closed_form(q):
    return 255 * (1 - q) / (1 - q**8) - 465 * (1 - q) ** 2 / ((1 - q**4) * (1 - q**5))


class TestChebyshevAB:
    @pytest.mark.parametrize("q", [0.75, 0.25, 0.6])
    def test_difference_matches_closed_form(self, q):
        d = chebyshev_ab_difference(parse("x^3"), parse("x^4"), Interval(1, 2), q)
        want = cheb_closed_form(q)
        assert abs(d - want) <= 1e-10 * max(1.0, abs(want))

    def test_signs(self):
        f, g = parse("x^3"), parse("x^4")
        assert chebyshev_ab_difference(f, g, Interval(1, 2), 0.75) > 0
        assert chebyshev_ab_difference(f, g, Interval(1, 2), 0.25) < 0

    def test_constants_unit_width(self):
        assert chebyshev_ab_difference(one, one, Interval(3, 4), 0.4) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("ident", ["CHEBYSHEV_AB_A", "CHEBYSHEV_AB_B"])
    def test_bounds_hold_where_plain_form_fails(self, ident):
        assert chebyshev_ab_difference(x, x, Interval(1, 2), 0.25) < 0
        v = check(ident, "x", "x", AB12, 0.25, l_f=1, L_f=1, l_g=1, L_g=1)
        assert v.verdict is Verdict.HOLDS

    def test_bounds_estimated_constants(self):
        v = check("CHEBYSHEV_AB_A", "x", "x", AB12, 0.25)
        assert v.verdict is Verdict.HOLDS
        assert v.constants["L_f"].tag().startswith("ESTIMATED")

    def test_estimated_slope_violates_endpoint_ratio(self):
        v = check("CHEBYSHEV_AB_A", "x", "x^2", AB12, 0.25)
        assert v.verdict is Verdict.VACUOUS
        assert v.hypothesis("endpoint_ratio_g").status is HypStatus.VIOLATED

    def test_requires_ab_kind(self):
        with pytest.raises(KindNotPermitted):
            check("CHEBYSHEV_AB_A", "x", "x", J01, 0.5)


def gruss_series(q):
    # 15/[4] - 21/([2][3]) from the monomial forms on [1, 2]
    return 15 / b(4, q) - 3 / b(2, q) * 7 / b(3, q)


class TestGruss:
    def test_monomials_jackson0(self):
        v = check("GRUSS_41", "x", "x^2", J01, 0.5, m=0, M=1, phi=0, Phi=1)
        assert v.verdict is Verdict.HOLDS
        assert v.lhs == pytest.approx(abs(1 / b(4, 0.5) - 1 / (b(2, 0.5) * b(3, 0.5))), rel=1e-12)
        assert v.lhs == pytest.approx(0.152381, abs=1e-6)
        assert v.rhs == 0.25

    def test_constants_equality(self):
        v = check("GRUSS_41", "2", "3", S.riemann(0.5, 1.5), 0.4)
        assert v.verdict is Verdict.HOLDS
        assert v.lhs == pytest.approx(0.0, abs=1e-12) and v.rhs == 0.0

    def test_restricted_opposite_pair(self):
        v = check("GRUSS_41", "x", "-x", S.restricted(1.0, 4), 0.5, m=-1, M=1, phi=-1, Phi=1)
        assert v.verdict is Verdict.HOLDS

    def test_supplied_bounds_too_tight(self):
        v = check("GRUSS_41", "x", "x^2", J01, 0.5, m=0, M=0.5, phi=0, Phi=1)
        assert v.verdict is Verdict.VACUOUS

    def test_ratio_at_most_one(self):
        rng = random.Random(1234)
        tested = 0
        while tested < 1000:
            f, g = catalog_function(rng), catalog_function(rng)
            bb = round(rng.uniform(0.5, 3.0), 3)
            kind = rng.choice(["jackson0", "restricted", "riemann"])
            if kind == "jackson0":
                spec = S.jackson0(bb)
            elif kind == "restricted":
                spec = S.restricted(bb, rng.randint(1, 12))
            else:
                spec = S.riemann(round(rng.uniform(0, 0.8 * bb), 3), bb)
            v = run_check(InequalityId.GRUSS_41, f, g, spec, rng.uniform(0.2, 0.8))
            if v.verdict not in (Verdict.HOLDS, Verdict.FAILS) or v.rhs <= 0:
                continue
            tested += 1
            assert v.lhs / v.rhs <= 1.0, (f.source, g.source, spec)


class TestGrussAB:
    @pytest.mark.parametrize("q", [0.2, 0.5, 0.8, 0.33])
    def test_difference_matches_series(self, q):
        d = gruss_ab_difference(x, x2, Interval(1, 2), q)
        want = gruss_series(q)
        assert abs(d - want) <= 1e-10 * max(1.0, abs(want))

    def test_root_at_half(self):
        assert gruss_ab_difference(x, x2, Interval(1, 2), 0.5) == pytest.approx(0.0, abs=1e-12)

    def test_sign_flips_across_half(self):
        lo = gruss_ab_difference(x, x2, Interval(1, 2), 0.2)
        hi = gruss_ab_difference(x, x2, Interval(1, 2), 0.8)
        assert lo * hi < 0

    def test_resolved_sign_is_negative_near_zero(self):
        # the series tends to -6 as q -> 0
        assert gruss_ab_difference(x, x2, Interval(1, 2), 1e-6) == pytest.approx(-6.0, rel=1e-4)

    def test_constants_unit_width(self):
        assert gruss_ab_difference(one, one, Interval(2, 3), 0.3) == pytest.approx(0.0, abs=1e-12)

    def test_inflated_bound_holds(self):
        v = check("GRUSS_AB_42", "x", "x^2", AB12, 0.2, m=0, M=2, phi=0, Phi=4)
        assert v.verdict is Verdict.HOLDS

    def test_constants_equality(self):
        v = check("GRUSS_AB_42", "2", "5", AB12, 0.6)
        assert v.verdict is Verdict.HOLDS
        assert v.lhs <= v.tolerance


class TestHermiteHadamard:
    def test_riemann_square(self):
        v = check("HH_RIEMANN_53", "x^2", None, S.riemann(1.0, 2.0), 0.5)
        assert v.verdict is Verdict.HOLDS
        lower, upper = v.side("lower"), v.side("upper")
        assert lower.lhs == pytest.approx(25 / 9, rel=1e-12)
        assert lower.rhs == pytest.approx(1 + 2 / b(2, 0.5) + 1 / b(3, 0.5), rel=1e-12)
        assert upper.rhs == pytest.approx(3.0, rel=1e-12)

    def test_restricted_square(self):
        v = check("HH_RESTRICTED_51", "x^2", None, S.restricted(1.0, 2), 0.5)
        assert v.verdict is Verdict.HOLDS
        assert v.side("lower").lhs == pytest.approx((1.25 / 1.5) ** 2, rel=1e-12)
        assert v.side("lower").rhs == pytest.approx(0.75, rel=1e-12)
        assert v.side("upper").rhs == pytest.approx(0.75, rel=1e-12)
        assert abs(v.side("upper").slack) <= v.side("upper").tolerance

    @pytest.mark.parametrize("q", [0.1, 0.5, 0.9])
    def test_linear_jackson0(self, q):
        assert check("HH_JACKSON0_52", "3*x + 1", None, J01, q).verdict is Verdict.HOLDS

    def test_concave_is_vacuous(self):
        v = check("HH_JACKSON0_52", "-x^2", None, J01, 0.5)
        assert v.verdict is Verdict.VACUOUS

    def test_undefined_at_zero_untestable(self):
        v = check("HH_JACKSON0_52", "1/x", None, J01, 0.5)
        assert v.verdict in (Verdict.UNTESTABLE, Verdict.VACUOUS)
        assert v.verdict is not Verdict.HOLDS

    def test_ab_variant(self):
        assert check("HH_JACKSON_AB_55", "x^2", None, AB12, 0.5).verdict is Verdict.HOLDS

    def test_corollary(self):
        assert check("HH_COR_56", "x^2 + 1", None, AB12, 0.5).verdict is Verdict.HOLDS

    def test_restricted_kind_mismatch(self):
        with pytest.raises((KindNotPermitted, ValueError)):
            check("HH_RESTRICTED_51", "x^2", None, J01, 0.5)


class TestTildeHelpers:
    def test_examples(self):
        assert tilde_hypothesis_helpers(1, 1, Interval(1, 2)) == {"increasing_sufficient": True, "convex_sufficient": True}
        assert not any(tilde_hypothesis_helpers(1, 5, Interval(1, 2)).values())
        assert all(tilde_hypothesis_helpers(0.3, 7, Interval(0, 2)).values())


class TestYoung:
    def test_first(self):
        v = check("YOUNG_61_I", "x", "x", J01, 0.5)
        assert v.verdict is Verdict.HOLDS
        assert v.lhs == pytest.approx(1 / b(3, 0.5), rel=1e-12)
        assert v.rhs == pytest.approx(1 / b(2, 0.5) ** 2, rel=1e-12)

    def test_second_symmetric_equality(self):
        v = check("YOUNG_61_II", "x + 1", "x + 1", S.riemann(0.0, 1.0), 0.5)
        assert v.verdict is Verdict.HOLDS
        assert abs(v.slack) <= v.tolerance

    @pytest.mark.parametrize("kind", [J01, S.restricted(2.0, 5), S.riemann(1.0, 3.0)])
    def test_constants_equality(self, kind):
        v = check("YOUNG_62_III", "1", "1", kind, 0.6)
        assert v.verdict is Verdict.HOLDS
        assert abs(v.slack) <= v.tolerance

    @pytest.mark.parametrize("ident", [i for i in InequalityId if i.value.startswith("YOUNG")])
    def test_all_members_hold(self, ident):
        v = check(ident, "x + 1", "exp(x)", J01, 0.4, pair=ConjugatePair.from_alpha(1.5))
        assert v.verdict is Verdict.HOLDS

    def test_ab_kind_refused(self):
        with pytest.raises(KindNotPermitted):
            check("YOUNG_61_I", "x", "x", AB12, 0.5)


class TestRatioFamily:
    def test_cassels_proportional(self):
        v = check("CASSELS_63_I", "x", "x", J01, 0.5)
        assert v.verdict is Verdict.HOLDS
        assert abs(v.slack) <= v.tolerance

    def test_schwarz_corollary(self):
        v = check("SCHWARZ_COR_65", "x+1", None, S.riemann(0.0, 1.0), 0.5, c=1, C=2)
        spec = S.riemann(0.0, 1.0)
        f = parse("x+1")
        j2, j1 = qint(parse("(x+1)^2"), spec, 0.5), qint(f, spec, 0.5)
        assert v.verdict is Verdict.HOLDS
        assert v.lhs == pytest.approx(j2, rel=1e-12)
        assert v.rhs == pytest.approx(9 / 8 * j1**2, rel=1e-12)

    def test_bounded(self):
        assert check("BOUNDED_64_I", "x+1", "x+2", J01, 0.5, c=1, C=2, d=2, D=3).verdict is Verdict.HOLDS

    @pytest.mark.parametrize("ident", [i for i in InequalityId if i.value.startswith(("CASSELS", "BOUNDED"))])
    def test_estimated_constants(self, ident):
        assert check(ident, "x + 1", "exp(x)", S.riemann(0.5, 2.0), 0.3).verdict is Verdict.HOLDS

    def test_nonpositive_is_vacuous(self):
        assert check("CASSELS_63_I", "x - 0.5", "x + 1", J01, 0.5).verdict is Verdict.VACUOUS

    def test_touching_zero_is_vacuous(self):
        v = check("SCHWARZ_COR_65", "x", None, J01, 0.5)
        assert v.verdict is Verdict.VACUOUS


class TestJensenPower:
    def test_power_mean(self):
        v = check("POWER_MEAN_COR_67", "x", None, J01, 0.5, p=2)
        assert v.verdict is Verdict.HOLDS
        assert v.lhs == pytest.approx(1 / b(2, 0.5) ** 2, rel=1e-12)
        assert v.rhs == pytest.approx(1 / b(3, 0.5), rel=1e-12)

    @pytest.mark.parametrize("f", ["x + 1", "exp(x)", "x^2 + 0.3"])
    def test_power_mean_p_one_equality(self, f):
        v = check("POWER_MEAN_COR_67", f, None, S.riemann(0.2, 1.7), 0.45, p=1)
        assert abs(v.slack) <= v.tolerance

    def test_reversed_constant_equality(self):
        v = check("JENSEN_POWER_66", "1", "1", J01, 0.5, p=0.5)
        assert v.verdict is Verdict.HOLDS
        assert v.side(v.sides[0].name).relation == ">="
        assert abs(v.slack) <= v.tolerance

    @pytest.mark.parametrize("p, mirrored", [(2.0, 0.5), (3.0, 0.25), (-1.0, 0.7)])
    def test_orientation_coherence(self, p, mirrored):
        a = check("JENSEN_POWER_66", "x + 1", "x + 2", J01, 0.5, p=p)
        c = check("JENSEN_POWER_66", "x + 1", "x + 2", J01, 0.5, p=mirrored)
        assert {a.sides[0].relation, c.sides[0].relation} == {"<=", ">="}
        assert a.verdict is c.verdict is Verdict.HOLDS

    def test_p_required(self):
        with pytest.raises(ValueError):
            check("JENSEN_POWER_66", "x", "x", J01, 0.5)


class TestLahRibaric:
    def test_special_case(self):
        v = check("LAH_RIBARIC_68", "1", "x+1", J01, 0.5, m=1, M=2, p=2)
        assert v.verdict is Verdict.HOLDS
        jg2 = 1 + 2 / b(2, 0.5) + 1 / b(3, 0.5)
        jg = 1 + 1 / b(2, 0.5)
        assert v.lhs == pytest.approx(jg2 + 2.0, rel=1e-12)
        assert v.rhs == pytest.approx(3 * jg, rel=1e-12)

    def test_degenerate_ratio(self):
        v = check("LAH_RIBARIC_68", "x + 1", "3*x + 3", S.riemann(0.0, 1.0), 0.5, p=3)
        assert v.verdict is Verdict.HOLDS
        assert abs(v.slack) <= v.tolerance

    def test_degenerate_coefficients(self):
        A, B = lah_ribaric_coefficients(2.0, 2.0, 3.0)
        assert (A, B) == (3 * 2.0**2, 2 * 2.0**3)
        near = lah_ribaric_coefficients(2.0, 2.0 + 1e-7, 3.0)
        assert near == pytest.approx((A, B), rel=1e-6)

    def test_ratio_to_zero_vacuous(self):
        assert check("LAH_RIBARIC_68", "x", "x^2", J01, 0.5, p=2).verdict is Verdict.VACUOUS

    def test_p2_fast_path_agrees(self):
        a = check("LAH_RIBARIC_68", "x + 1", "x + 3", J01, 0.5, p=2)
        c = check("LAH_RIBARIC_68_P2", "x + 1", "x + 3", J01, 0.5)
        assert a.lhs == pytest.approx(c.lhs, rel=1e-12) and a.rhs == pytest.approx(c.rhs, rel=1e-12)


GENERIC = [
    i for i in InequalityId
    if default_kind(i) is IntegralKind.JACKSON0 and not i.value.startswith(("HH_", "CHEBYSHEV_AB", "GRUSS_AB"))
]


class TestRestrictedConvergence:
    @pytest.mark.parametrize("ident", GENERIC)
    def test_n_sixty_matches_jackson0(self, ident):
        kw = {"p": 2.0} if ident.value.startswith(("JENSEN", "POWER", "LAH")) else {}
        full = check(ident, "x + 1", "exp(x)", J01, 0.5, **kw)
        cut = check(ident, "x + 1", "exp(x)", S.restricted(1.0, 60), 0.5, **kw)
        assert abs(full.lhs - cut.lhs) <= 1e-8
        assert abs(full.rhs - cut.rhs) <= 1e-8


class TestVerdictInvariant:
    @given(st.sampled_from(GENERIC), st.integers(0, 10_000), st.floats(0.2, 0.8))
    @settings(max_examples=150, deadline=None)
    def test_holds_iff_hypotheses_and_slack(self, ident, seed, q):
        rng = random.Random(seed)
        f, g = catalog_function(rng), catalog_function(rng)
        v = run_check(ident, f, g, J01, q, P(p=2.0), pair=ConjugatePair(2.0, 2.0))
        ok_hyps = all(h.status in (HypStatus.SATISFIED, HypStatus.ESTIMATED) for h in v.hypotheses)
        if v.verdict is Verdict.HOLDS:
            assert ok_hyps and all(s.slack >= -s.tolerance for s in v.sides)
        if v.verdict is Verdict.VACUOUS:
            assert any(h.status is HypStatus.VIOLATED for h in v.hypotheses)
        assert v.verdict is not Verdict.FAILS
        assert all(math.isfinite(s.slack) for s in v.sides)
