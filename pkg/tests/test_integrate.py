import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qineq.core import Interval
from qineq.expr import DomainError, parse
from qineq.integrate import (
    RELATION_NAMES,
    IntegralKind,
    IntegrationError,
    QIntegralSpec,
    RelationStatus,
    Status,
    TruncationPolicy,
    classical_integral,
    integrate,
    jackson0_terms,
    monomial_closed_form,
    qint,
    verify_correlations,
)

S = QIntegralSpec


def exact_monomial(n: int, a: Fraction, b: Fraction, q: Fraction) -> Fraction:
    """(b^(n+1) - a^(n+1)) (1 - q) / (1 - q^(n+1)) in exact arithmetic."""
    return (b ** (n + 1) - a ** (n + 1)) * (1 - q) / (1 - q ** (n + 1))


class TestSpec:
    def test_restricted_lower_end_is_derived(self):
        with pytest.raises(ValueError):
            QIntegralSpec(IntegralKind.RESTRICTED, 1.0, 0.5, 2)
        assert S.restricted(1.0, 2).lower(0.5) == 0.25

    @pytest.mark.parametrize("n", [0, -1, 1.5, None])
    def test_restricted_needs_positive_integer_n(self, n):
        with pytest.raises(ValueError):
            QIntegralSpec(IntegralKind.RESTRICTED, 1.0, n=n)

    def test_jackson0_has_no_a(self):
        with pytest.raises(ValueError):
            QIntegralSpec(IntegralKind.JACKSON0, 1.0, 0.5)

    def test_n_only_for_restricted(self):
        with pytest.raises(ValueError):
            QIntegralSpec(IntegralKind.RIEMANN, 2.0, 1.0, 3)

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            S.jackson_ab(2.0, 1.0)

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            TruncationPolicy(rtol=0.0)
        with pytest.raises(ValueError):
            TruncationPolicy(max_terms=0)


class TestExamples:
    def test_constant_jackson0(self):
        tight = TruncationPolicy(rtol=1e-17, atol=1e-300)
        assert integrate(parse("1"), S.jackson0(2.0), 0.5, tight).value == 2.0
        pol = TruncationPolicy()
        r = integrate(parse("1"), S.jackson0(2.0), 0.5, pol)
        assert abs(r.value - 2.0) <= pol.atol + pol.rtol * 2.0

    def test_cube_on_one_two(self):
        r = integrate(parse("x^3"), S.jackson_ab(1.0, 2.0), 0.5)
        assert r.status is Status.CONVERGED
        assert r.value == pytest.approx(8.0, rel=1e-13)

    def test_log_shift_ab_domain_error(self):
        r = integrate(parse("ln(x-1)"), S.jackson_ab(2.0, 3.0), 0.5)
        assert r.status is Status.DOMAIN_ERROR
        assert isinstance(r.error, DomainError)
        assert 0.0 <= r.error.point < 2.0
        assert math.isnan(r.value)
        with pytest.raises(IntegrationError):
            qint(parse("ln(x-1)"), S.jackson_ab(2.0, 3.0), 0.5)

    def test_log_shift_riemann_converges(self):
        r = integrate(parse("ln(x-1)"), S.riemann(2.0, 3.0), 0.5)
        assert r.converged
        assert math.isfinite(r.value)

    def test_constant_riemann(self):
        assert integrate(parse("1"), S.riemann(1.0, 3.0), 0.9).value == pytest.approx(2.0, rel=1e-12)

    def test_restricted_single_term(self):
        r = integrate(parse("x"), S.restricted(1.0, 1), 0.5)
        assert r.value == 0.5 and r.terms_used == 1

    def test_log_at_zero_attempted(self):
        r = integrate(parse("ln(x)"), S.jackson0(1.0), 0.5)
        assert r.converged
        # (1-q) sum_k q^k ln(q^k) = q ln q / (1-q)
        assert r.value == pytest.approx(0.5 * math.log(0.5) / 0.5, rel=1e-11)

    def test_max_terms(self):
        r = integrate(parse("x"), S.jackson0(1.0), 0.99, TruncationPolicy(max_terms=10))
        assert r.status is Status.MAX_TERMS_REACHED
        assert r.terms_used == 10

    def test_slow_q_diagnostic(self):
        r = integrate(parse("1"), S.jackson0(1.0), 0.999)
        assert any("slow" in d for d in r.diagnostics)

    def test_converged_tail_within_tolerance(self):
        pol = TruncationPolicy()
        for src in ("x^2", "exp(x)", "sin(5*x)", "1/(x+1)"):
            for q in (0.1, 0.5, 0.9, 0.99):
                r = integrate(parse(src), S.jackson0(2.0), q, pol)
                assert r.converged
                assert r.tail_bound_estimate <= pol.atol + pol.rtol * abs(r.value)

    def test_as_dict_keys(self):
        d = integrate(parse("x"), S.jackson0(1.0), 0.5).as_dict()
        assert list(d) == ["value", "terms_used", "tail_bound_estimate", "status"]


class TestMonomialOracle:
    @pytest.mark.parametrize("a, b", [(0, 1), (1, 2), (Fraction(1, 2), 3)])
    def test_against_exact_rationals(self, a, b):
        a, b = Fraction(a), Fraction(b)
        for k in range(1, 10):
            qf = Fraction(k, 10)
            for n in range(9):
                want = float(exact_monomial(n, a, b, qf))
                got = integrate(parse(f"x^{n}"), S.jackson_ab(float(a), float(b)), k / 10).value
                assert abs(got - want) <= 1e-10 * max(1.0, abs(want)), (n, k, a, b)

    @pytest.mark.parametrize(
        "n, iv, q, want",
        [(3, Interval(1, 2), 0.5, 8.0), (0, Interval(0, 3), 0.4, 3.0), (1, Interval(0, 1), 0.5, 1 / 1.5)],
    )
    def test_closed_form_values(self, n, iv, q, want):
        assert monomial_closed_form(n, iv, q) == pytest.approx(want, rel=1e-15)


class TestClassical:
    def test_square(self):
        assert classical_integral(parse("x^2"), Interval(0, 1)) == pytest.approx(1 / 3, abs=1e-10)

    def test_constant(self):
        assert classical_integral(parse("1"), Interval(1, 2)) == pytest.approx(1.0, abs=1e-12)

    def test_exp(self):
        assert classical_integral(parse("exp(x)"), Interval(0, 1)) == pytest.approx(math.e - 1, abs=1e-9)


kinds = st.sampled_from(["jackson0", "jackson-ab", "restricted", "riemann"])
catalog = st.sampled_from(["x", "x^2 + 1", "exp(x)", "sin(x)", "x^3", "1/(x+1)"])


def make_spec(kind: str, a: float, b: float, n: int) -> QIntegralSpec:
    if kind == "jackson0":
        return S.jackson0(b)
    if kind == "restricted":
        return S.restricted(b, n)
    return QIntegralSpec(IntegralKind(kind), b, a)


class TestProperties:
    @given(kinds, catalog, catalog, st.floats(-3, 3), st.floats(-3, 3), st.floats(0.0, 1.5),
           st.floats(0.2, 2.0), st.integers(1, 30), st.floats(0.05, 0.95))
    @settings(max_examples=300)
    def test_linearity(self, kind, fs, gs, alpha, beta, a, w, n, q):
        spec = make_spec(kind, a, a + w, n)
        f, g = parse(fs), parse(gs)
        combo = parse(f"({alpha!r})*({fs}) + ({beta!r})*({gs})")
        lhs = qint(combo, spec, q)
        parts = alpha * qint(f, spec, q), beta * qint(g, spec, q)
        scale = max(1.0, abs(lhs), *map(abs, parts))
        assert abs(lhs - sum(parts)) <= 1e-10 * scale

    @given(catalog, st.floats(0.2, 3.0), st.floats(0.05, 0.95))
    @settings(max_examples=100)
    def test_restricted_are_prefix_sums(self, fs, b, q):
        f = parse(fs)
        terms = jackson0_terms(f, b, q, 40)
        for n in range(1, 41):
            assert qint(f, S.restricted(b, n), q) == math.fsum(terms[:n])

    @given(st.floats(-5, 5), st.floats(0.0, 3.0), st.floats(0.1, 3.0), st.floats(0.05, 0.95))
    @settings(max_examples=200)
    def test_riemann_constant(self, c, a, w, q):
        pol = TruncationPolicy()
        v = qint(parse(repr(c)), S.riemann(a, a + w), q, pol)
        want = c * w
        assert abs(v - want) <= 2 * (pol.atol + pol.rtol * abs(want))

    @pytest.mark.parametrize("src", ["x^2", "exp(x)", "sin(x)"])
    def test_q_to_one(self, src):
        f = parse(src)
        r = integrate(f, S.jackson0(2.0), 0.999)
        assert r.converged and r.terms_used < 50_000
        assert abs(r.value - classical_integral(f, Interval(0.0, 2.0))) <= 5e-3

    def test_q_to_one_error_shrinks(self):
        f = parse("exp(x)")
        exact = math.exp(2) - 1
        errs = [abs(qint(f, S.jackson0(2.0), q) - exact) for q in (0.9, 0.99, 0.999)]
        assert errs[0] > errs[1] > errs[2]


class TestCorrelations:
    def test_names(self):
        rep = verify_correlations(parse("x"), Interval(1, 2), 0.5, parse("x^2"))
        assert tuple(c.name for c in rep.checks) == RELATION_NAMES
        assert rep.all_pass

    def test_constant_function(self):
        for iv in (Interval(0, 1), Interval(1, 3)):
            for q in (0.2, 0.7):
                rep = verify_correlations(parse("1"), iv, q)
                assert rep.all_pass
                assert all(c.error <= 1e-12 * max(1.0, abs(c.rhs)) for c in rep.checks if c.name != "restricted_limit")

    def test_log_shift(self):
        rep = verify_correlations(parse("ln(x-1)"), Interval(2, 3), 0.5)
        assert rep["riemann_hat"].status is RelationStatus.PASS
        assert rep["ab_tilde"].status is RelationStatus.UNTESTABLE
        assert not rep.all_pass

    @pytest.mark.parametrize("fs", ["x", "x^2", "exp(x)", "x+1"])
    @pytest.mark.parametrize("gs", ["x^2", "x^3"])
    @pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
    @pytest.mark.parametrize("iv", [Interval(1, 2), Interval(0.5, 3)])
    def test_grid(self, fs, gs, q, iv):
        rep = verify_correlations(parse(fs), iv, q, parse(gs))
        assert rep.all_pass, [c.as_dict() for c in rep.checks if c.status is not RelationStatus.PASS]

    def test_restricted_to_jackson0_at_sixty(self):
        f = parse("exp(x)")
        assert abs(qint(f, S.restricted(1.0, 60), 0.5) - qint(f, S.jackson0(1.0), 0.5)) <= 1e-8
