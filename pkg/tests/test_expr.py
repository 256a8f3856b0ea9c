import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qineq.expr import (
    FUNCTIONS,
    BinOp,
    Call,
    DomainError,
    EvalError,
    ExprSyntaxError,
    Neg,
    NonFinite,
    Num,
    UnknownFunction,
    Var,
    evaluate,
    parse,
    to_source,
)


class TestParse:
    def test_power_of_variable(self):
        assert parse("x^3").root == BinOp("^", Var(), Num(3.0))

    def test_log_of_shift(self):
        assert parse("ln(x-1)").root == Call("ln", BinOp("-", Var(), Num(1.0)))

    def test_double_caret_offset(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse("x^^2")
        assert info.value.offset == 2
        assert "x" in info.value.expected

    def test_juxtaposition_rejected(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse("2x")
        assert info.value.offset == 1

    def test_offsets_are_bytes(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse("x + é")
        assert info.value.offset == 4
        with pytest.raises(ExprSyntaxError) as info:
            parse("é")
        assert info.value.offset == 0

    def test_unbalanced_paren(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse("(x + 1")
        assert info.value.offset == 6
        assert ")" in info.value.expected

    def test_empty_source(self):
        with pytest.raises(ExprSyntaxError):
            parse("   ")

    def test_unknown_function(self):
        with pytest.raises(UnknownFunction) as info:
            parse("1 + tan(x)")
        assert info.value.name == "tan"
        assert info.value.offset == 4

    def test_bare_function_name_needs_call(self):
        with pytest.raises(ExprSyntaxError):
            parse("sin + 1")

    @pytest.mark.parametrize(
        "source, x, want",
        [
            ("2^3^2", 0.0, 512.0),
            ("-x^2", 3.0, -9.0),
            ("(-x)^2", 3.0, 9.0),
            ("1 - 2 - 3", 0.0, -4.0),
            ("8 / 4 / 2", 0.0, 1.0),
            ("2 + 3 * x", 2.0, 8.0),
            ("2^-1", 0.0, 0.5),
            ("1.5e1 + .5", 0.0, 15.5),
            ("  sqrt( abs(-x) ) ", 4.0, 2.0),
        ],
    )
    def test_precedence_and_associativity(self, source, x, want):
        assert evaluate(parse(source), x) == want

    def test_whitespace_insignificant(self):
        assert parse(" x ^ 2 + 1 ").root == parse("x^2+1").root


class TestEvaluate:
    def test_cube(self):
        assert parse("x^3")(2.0) == 8.0

    def test_log_domain(self):
        with pytest.raises(DomainError) as info:
            parse("ln(x-1)")(0.5)
        assert info.value.point == 0.5
        assert info.value.reason == "ln of non-positive"
        assert info.value.subexpr == "ln(x - 1)"

    def test_division_by_zero(self):
        with pytest.raises(DomainError) as info:
            parse("1/x")(0.0)
        assert info.value.point == 0.0
        assert info.value.reason == "division by zero"

    def test_negative_base_fractional_power(self):
        with pytest.raises(DomainError):
            parse("x^0.5")(-4.0)
        assert parse("x^3")(-2.0) == -8.0

    def test_zero_to_negative_power(self):
        with pytest.raises(DomainError):
            parse("x^-1")(0.0)

    def test_sqrt_negative(self):
        with pytest.raises(DomainError):
            parse("sqrt(x)")(-1.0)

    def test_overflow_is_nonfinite(self):
        with pytest.raises(NonFinite):
            parse("exp(x)")(1000.0)
        with pytest.raises(NonFinite):
            parse("x * x")(1e200)

    def test_errors_are_arithmetic(self):
        assert issubclass(DomainError, EvalError)
        assert issubclass(EvalError, ArithmeticError)

    def test_deterministic_error(self):
        e = parse("sqrt(x - 2) + 1")
        errs = []
        for _ in range(2):
            with pytest.raises(DomainError) as info:
                e(1.0)
            errs.append((info.value.point, info.value.reason, info.value.subexpr))
        assert errs[0] == errs[1]


# --------------------------------------------------------------------------
# property tests
# --------------------------------------------------------------------------

numbers = st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False).map(Num)


def trees(max_leaves: int = 12):
    leaves = st.one_of(numbers, st.just(Var()))

    def extend(children):
        return st.one_of(
            st.builds(Neg, children),
            st.builds(BinOp, st.sampled_from("+-*/^"), children, children),
            st.builds(Call, st.sampled_from(sorted(FUNCTIONS)), children),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


class TestRoundTrip:
    @given(trees())
    @settings(max_examples=300)
    def test_print_parse_identity(self, tree):
        assert parse(to_source(tree)).root == tree

    @given(trees(), st.floats(min_value=-10, max_value=10))
    @settings(max_examples=300)
    def test_value_is_finite_or_error(self, tree, x):
        e = parse(to_source(tree))
        try:
            v = e(x)
        except EvalError:
            return
        assert math.isfinite(v)

    @given(trees(), st.floats(min_value=-10, max_value=10))
    @settings(max_examples=100)
    def test_evaluation_repeatable(self, tree, x):
        e = parse(to_source(tree))

        def outcome():
            try:
                return ("value", e(x))
            except EvalError as exc:
                return (type(exc).__name__, exc.reason, exc.subexpr)

        assert outcome() == outcome()


class TestFuzz:
    @given(st.text(alphabet="x0123456789.+-*/^() eslnqrtabcoi", max_size=30))
    @settings(max_examples=500)
    def test_parser_total(self, source):
        try:
            e = parse(source)
        except (ExprSyntaxError, UnknownFunction) as exc:
            assert 0 <= exc.offset <= len(source.encode("utf-8"))
            return
        try:
            e(0.7)
        except EvalError:
            pass

    @given(st.binary(max_size=40))
    @settings(max_examples=300)
    def test_arbitrary_utf8(self, raw):
        source = raw.decode("utf-8", errors="replace")
        try:
            parse(source)
        except (ExprSyntaxError, UnknownFunction) as exc:
            assert 0 <= exc.offset <= len(source.encode("utf-8"))
