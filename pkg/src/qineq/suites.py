"""Built-in reproduction suites driven by ``qineq reproduce``.

``paper`` re-derives the reference worked examples, the sign and
threshold studies and the identities between integral kinds; ``property`` runs the randomized theorem checks
from :mod:`qineq.properties`.  Output is deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Optional

from qineq.core import HypothesisParams, Interval, q_bracket
from qineq.expr import DomainError, parse
from qineq.ineq import InequalityId, KindNotPermitted, Verdict, check_chebyshev, run_check
from qineq.ineq.classical import chebyshev_ab_difference, gruss_ab_difference
from qineq.integrate import (
    QIntegralSpec,
    Status,
    classical_integral,
    integrate,
    monomial_closed_form,
    verify_correlations,
)
from qineq.properties import DEFAULT_QUOTA, run_all
from qineq.search import SweepSpec, find_counterexample, sweep

SUITES = ("paper", "property")
GRID_Q = tuple(round(0.1 * k, 1) for k in range(1, 10))
SEARCH_Q = tuple(round(0.05 * k, 2) for k in range(1, 20))


@dataclass(frozen=True)
class CaseResult:
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    cases: tuple[CaseResult, ...]
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def as_dict(self) -> dict:
        d: dict = {"suite": self.suite}
        if self.seed is not None:
            d["seed"] = self.seed
        d["passed"] = self.passed
        d["counts"] = {"pass": sum(c.passed for c in self.cases), "fail": sum(not c.passed for c in self.cases)}
        d["cases"] = [c.as_dict() for c in self.cases]
        return d

    def to_text(self) -> str:
        width = max(len(c.name) for c in self.cases)
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  {c.detail}" for c in self.cases]
        n_pass = sum(c.passed for c in self.cases)
        lines.append(f"{n_pass}/{len(self.cases)} passed")
        return "\n".join(lines) + "\n"


def g(x: float) -> str:
    return f"{x:.12g}"


def rel_close(value: float, expected: float, rtol: float, scale: float = 1.0) -> bool:
    return abs(value - expected) <= rtol * max(scale, abs(expected))


# --------------------------------------------------------------------------
# closed forms used as oracles
# --------------------------------------------------------------------------


def chebyshev_ab_closed_form(q: float) -> tuple[float, float]:
    """The two terms 255(1-q)/(1-q^8) and 465(1-q)^2/((1-q^4)(1-q^5)) for
    f = x^3, g = x^4 on [1, 2]; their difference is the Chebyshev defect."""
    return 255 * (1 - q) / (1 - q**8), 465 * (1 - q) ** 2 / ((1 - q**4) * (1 - q**5))


def gruss_ab_printed_form(q: float) -> float:
    """The published closed form of I(x^3) - I(x) I(x^2) on [1, 2]."""
    return (1 - 2 * q) * 3 * (2 - q) / ((1 + q) * (1 + q * q) * (1 + q + q * q))


def gruss_ab_oracle(q: float) -> float:
    """15/[4] - 21/([2][3]) from the monomial closed forms."""
    return 15 / q_bracket(4, q) - 21 / (q_bracket(2, q) * q_bracket(3, q))


# --------------------------------------------------------------------------
# reference suite cases
# --------------------------------------------------------------------------


def case_monomial_oracle() -> CaseResult:
    worst = 0.0
    for iv in (Interval(0.0, 1.0), Interval(1.0, 2.0), Interval(0.5, 3.0)):
        spec = QIntegralSpec.jackson_ab(iv.a, iv.b)
        for q in GRID_Q:
            for n in range(9):
                exact = monomial_closed_form(n, iv, q)
                got = integrate(parse(f"x^{n}"), spec, q).value
                worst = max(worst, abs(got - exact) / max(1.0, abs(exact)))
    return CaseResult("monomial_oracle", worst <= 1e-10, f"max scaled error {g(worst)} (limit 1e-10)")


def case_correlations() -> CaseResult:
    bad = []
    count = 0
    for fs in ("x", "x^2", "exp(x)", "x+1"):
        for gs in ("x^2", "x^3"):
            for q in (0.3, 0.5, 0.8):
                for iv in (Interval(1.0, 2.0), Interval(0.5, 3.0)):
                    report = verify_correlations(parse(fs), iv, q, parse(gs))
                    count += len(report.checks)
                    bad += [f"{c.name}[f={fs},g={gs},q={q},{iv.a}..{iv.b}]" for c in report.checks if c.status.value != "PASS"]
    detail = f"{count - len(bad)}/{count} relations pass" + (f"; first failure {bad[0]}" if bad else "")
    return CaseResult("kind_correlations", not bad, detail)


def case_chebyshev_ab_closed_form() -> CaseResult:
    f, h = parse("x^3"), parse("x^4")
    worst = 0.0
    for q in GRID_Q:
        t1, t2 = chebyshev_ab_closed_form(q)
        got = chebyshev_ab_difference(f, h, Interval(1.0, 2.0), q)
        worst = max(worst, abs(got - (t1 - t2)) / max(1.0, abs(t1), abs(t2)))
    return CaseResult("chebyshev_ab_closed_form", worst <= 1e-10, f"max error relative to term size {g(worst)}")


def case_chebyshev_ab_signs() -> CaseResult:
    f, h = parse("x^3"), parse("x^4")
    lo = chebyshev_ab_difference(f, h, Interval(1.0, 2.0), 0.25)
    hi = chebyshev_ab_difference(f, h, Interval(1.0, 2.0), 0.75)
    return CaseResult("chebyshev_ab_signs", lo < 0 < hi, f"q=0.25: {g(lo)}, q=0.75: {g(hi)}")


def case_chebyshev_ab_threshold() -> CaseResult:
    rep = sweep(SweepSpec("chebyshev_ab_difference", parse("x^3"), parse("x^4"), a=1.0, b=2.0, bisect=True))
    ts = rep.thresholds
    ok = len(ts) == 1 and abs(ts[0].value - 0.5) <= 1e-6 and ts[0].hi - ts[0].lo <= 1e-6
    return CaseResult("chebyshev_ab_threshold", ok, "; ".join(t.label() for t in ts) or "no threshold")


def case_gruss_ab_oracle() -> CaseResult:
    f, h = parse("x"), parse("x^2")
    worst = 0.0
    for q in GRID_Q:
        got = gruss_ab_difference(f, h, Interval(1.0, 2.0), q)
        scale = max(1.0, 15 / q_bracket(4, q))
        worst = max(worst, abs(got - gruss_ab_oracle(q)) / scale)
    return CaseResult("gruss_ab_series_oracle", worst <= 1e-10, f"max error relative to term size {g(worst)}")


def case_gruss_ab_sign() -> CaseResult:
    """The printed closed form has the opposite sign of the true value
    away from its root; the resolved form is (2q - 1) 3(2 - q)/(...)."""
    opposite = all(
        gruss_ab_oracle(q) * gruss_ab_printed_form(q) < 0 for q in GRID_Q if q != 0.5
    )
    resolved = all(rel_close(gruss_ab_oracle(q), -gruss_ab_printed_form(q), 1e-12) for q in GRID_Q)
    limit = gruss_ab_oracle(1e-9)
    ok = opposite and resolved and abs(limit + 6) < 1e-6
    return CaseResult(
        "gruss_ab_sign_resolution", ok,
        f"series equals minus the printed form: {resolved}; value at q->0: {g(limit)} (printed form gives +6)",
    )


def case_gruss_ab_root() -> CaseResult:
    rep = sweep(SweepSpec("gruss_ab_difference", parse("x"), parse("x^2"), a=1.0, b=2.0, bisect=True))
    ts = [t for t in rep.thresholds if t.quantity == "slack"]
    ok = len(ts) == 1 and abs(ts[0].value - 0.5) <= 1e-6
    return CaseResult("gruss_ab_root", ok, "; ".join(t.label() for t in ts) or "no threshold")


def case_gruss_bound_crossing() -> CaseResult:
    """Bound comparison with m=1, M=2, phi=1, Phi=4 on [1, 2]; the
    crossing is reported as found, not asserted to be 1/3."""
    params = HypothesisParams.of(m=1, M=2, phi=1, Phi=4)
    rep = sweep(SweepSpec("gruss_ab_difference", parse("x"), parse("x^2"), a=1.0, b=2.0, bisect=True, params=params))
    ts = [t for t in rep.thresholds if t.quantity == "bound"]
    below = [r for r in rep.rows if r.param < (ts[0].lo if ts else 0.0)]
    ok = len(ts) == 1 and all(r.bound_slack < 0 for r in below) and 0.0 < ts[0].value < 0.5
    detail = "; ".join(f"{t.label()} (claimed 1/3, offset {g(t.value - 1 / 3)})" for t in ts) or "no crossing"
    return CaseResult("gruss_bound_crossing", ok, detail)


def case_q_limit() -> CaseResult:
    parts, ok = [], True
    iv = Interval(0.0, 2.0)
    for src in ("x^2", "exp(x)", "sin(x)"):
        f = parse(src)
        res = integrate(f, QIntegralSpec.jackson0(2.0), 0.999)
        err = abs(res.value - classical_integral(f, iv))
        ok &= err <= 5e-3 and res.terms_used < 50_000 and res.converged
        parts.append(f"{src}: err {g(err)}, {res.terms_used} terms")
    return CaseResult("q_to_one_limit", ok, "; ".join(parts))


def case_restricted_limit() -> CaseResult:
    f = parse("exp(x)")
    gq = integrate(f, QIntegralSpec.restricted(1.0, 60), 0.5).value
    full = integrate(f, QIntegralSpec.jackson0(1.0), 0.5).value
    err = abs(gq - full)
    return CaseResult("restricted_to_jackson0", err <= 1e-8, f"|G(n=60) - I| = {g(err)}")


def case_ab_domain_error() -> CaseResult:
    f = parse("ln(x-1)")
    ab = integrate(f, QIntegralSpec.jackson_ab(2.0, 3.0), 0.5)
    rie = integrate(f, QIntegralSpec.riemann(2.0, 3.0), 0.5)
    point = ab.error.point if ab.error is not None else math.nan
    ok = (
        ab.status is Status.DOMAIN_ERROR
        and isinstance(ab.error, DomainError)
        and 0.0 <= point < 2.0
        and rie.converged
    )
    return CaseResult("ab_domain_error", ok, f"jackson-ab fails at x={g(point)}; riemann value {g(rie.value)}")


def _verdict_case(name: str, ident: str, f: str, gsrc: Optional[str], spec: QIntegralSpec, q: float,
                  expect: Verdict, checks: dict[str, tuple[float, float]] = {}, **params) -> Callable[[], CaseResult]:
    def run() -> CaseResult:
        v = run_check(ident, parse(f), None if gsrc is None else parse(gsrc), spec, q, HypothesisParams.of(**params))
        got = {}
        ok = v.verdict is expect
        for key, (want, tol) in checks.items():
            side, _, attr = key.partition(".")
            val = getattr(v.side(side), attr) if attr else getattr(v, side)
            got[key] = val
            ok &= abs(val - want) <= tol
        detail = f"{v.verdict.value}" + "".join(f", {k}={g(x)}" for k, x in got.items())
        return CaseResult(name, ok, detail)

    return run


def case_chebyshev_kind_refused() -> CaseResult:
    try:
        check_chebyshev(parse("x^3"), parse("x^4"), QIntegralSpec.jackson_ab(1.0, 2.0), 0.25)
    except KindNotPermitted as exc:
        return CaseResult("chebyshev_refuses_ab_kind", True, str(exc))
    return CaseResult("chebyshev_refuses_ab_kind", False, "checker accepted the jackson-ab kind")


def case_counterexamples() -> CaseResult:
    f3, f4 = parse("x^3"), parse("x^4")
    ab = QIntegralSpec.jackson_ab(1.0, 2.0)
    cheb = find_counterexample(InequalityId.CHEBYSHEV_31, f3, f4, ab, SEARCH_Q)
    none = find_counterexample(InequalityId.CHEBYSHEV_31, f3, f4, QIntegralSpec.jackson0(1.0), SEARCH_Q)
    gru = find_counterexample(InequalityId.GRUSS_41, parse("x"), parse("x^2"), ab, SEARCH_Q,
                              HypothesisParams.of(m=1, M=2, phi=1, Phi=4))
    ok = (
        cheb is not None and cheb.q < 0.5 and cheb.boundary is not None and abs(cheb.boundary.value - 0.5) <= 1e-6
        and none is None
        and gru is not None and gru.q < 1 / 3 and gru.boundary is not None
    )
    parts = [
        f"chebyshev ab witness q={g(cheb.q)} boundary {g(cheb.boundary.value)}" if cheb and cheb.boundary else "chebyshev ab: none",
        f"chebyshev jackson0: {'none' if none is None else g(none.q)}",
        f"gruss ab witness q={g(gru.q)} boundary {g(gru.boundary.value)}" if gru and gru.boundary else "gruss ab: none",
    ]
    return CaseResult("source_form_counterexamples", ok, "; ".join(parts))


def reference_cases() -> list[Callable[[], CaseResult]]:
    j01 = QIntegralSpec.jackson0(1.0)
    return [
        case_monomial_oracle,
        case_correlations,
        case_chebyshev_ab_closed_form,
        case_chebyshev_ab_signs,
        case_chebyshev_ab_threshold,
        case_gruss_ab_oracle,
        case_gruss_ab_sign,
        case_gruss_ab_root,
        case_gruss_bound_crossing,
        case_q_limit,
        case_restricted_limit,
        case_ab_domain_error,
        case_chebyshev_kind_refused,
        case_counterexamples,
        _verdict_case("chebyshev_jackson0", "CHEBYSHEV_31", "x", "x", j01, 0.5, Verdict.HOLDS,
                      {"slack": (1 / q_bracket(3, 0.5) - 1 / q_bracket(2, 0.5) ** 2, 1e-9)}),
        _verdict_case("chebyshev_ab_bounds", "CHEBYSHEV_AB_A", "x", "x", QIntegralSpec.jackson_ab(1.0, 2.0), 0.25,
                      Verdict.HOLDS),
        _verdict_case("chebyshev_ab_bounds_b", "CHEBYSHEV_AB_B", "x", "x", QIntegralSpec.jackson_ab(1.0, 2.0), 0.25,
                      Verdict.HOLDS),
        _verdict_case("chebyshev_ab_bounds_vacuous", "CHEBYSHEV_AB_A", "x", "x^2", QIntegralSpec.jackson_ab(1.0, 2.0),
                      0.25, Verdict.VACUOUS),
        _verdict_case("gruss_jackson0", "GRUSS_41", "x", "x^2", j01, 0.5, Verdict.HOLDS,
                      {"lhs": (0.152381, 1e-6), "rhs": (0.25, 1e-12)}, m=0, M=1, phi=0, Phi=1),
        _verdict_case("gruss_ab_inflated", "GRUSS_AB_42", "x", "x^2", QIntegralSpec.jackson_ab(1.0, 2.0), 0.2,
                      Verdict.HOLDS, m=0, M=2, phi=0, Phi=4),
        _verdict_case("hermite_hadamard_riemann", "HH_RIEMANN_53", "x^2", None, QIntegralSpec.riemann(1.0, 2.0), 0.5,
                      Verdict.HOLDS, {"lower.lhs": (25 / 9, 1e-12), "lower.rhs": (2.904762, 1e-6),
                                      "upper.rhs": (3.0, 1e-12)}),
        _verdict_case("hermite_hadamard_restricted", "HH_RESTRICTED_51", "x^2", None, QIntegralSpec.restricted(1.0, 2),
                      0.5, Verdict.HOLDS, {"lower.lhs": (0.694444, 1e-6), "lower.rhs": (0.75, 1e-12),
                                           "upper.rhs": (0.75, 1e-12)}),
        _verdict_case("young_first", "YOUNG_61_I", "x", "x", j01, 0.5, Verdict.HOLDS,
                      {"lhs": (1 / q_bracket(3, 0.5), 1e-12), "rhs": (1 / q_bracket(2, 0.5) ** 2, 1e-12)}),
        _verdict_case("schwarz_corollary", "SCHWARZ_COR_65", "x+1", None, QIntegralSpec.riemann(0.0, 1.0), 0.5,
                      Verdict.HOLDS, c=1, C=2),
        _verdict_case("bounded_ratio", "BOUNDED_64_I", "x+1", "x+2", j01, 0.5, Verdict.HOLDS, c=1, C=2, d=2, D=3),
        _verdict_case("power_mean", "POWER_MEAN_COR_67", "x", None, j01, 0.5, Verdict.HOLDS,
                      {"lhs": (1 / q_bracket(2, 0.5) ** 2, 1e-12), "rhs": (1 / q_bracket(3, 0.5), 1e-12)}, p=2),
        _verdict_case("lah_ribaric", "LAH_RIBARIC_68", "1", "x+1", j01, 0.5, Verdict.HOLDS, m=1, M=2, p=2),
        _verdict_case("lah_ribaric_vacuous", "LAH_RIBARIC_68", "x", "x^2", j01, 0.5, Verdict.VACUOUS, p=2),
    ]


def run_reference() -> SuiteReport:
    results = []
    for case in reference_cases():
        try:
            results.append(case())
        except Exception as exc:  # a crash is a failed case, not a crashed suite
            name = getattr(case, "__name__", "case").removeprefix("case_")
            results.append(CaseResult(name, False, f"{type(exc).__name__}: {exc}"))
    return SuiteReport("paper", tuple(results))


def run_property(seed: int = 0, quota: int = DEFAULT_QUOTA) -> SuiteReport:
    cases = []
    for stats in run_all(seed, quota):
        ok = stats.passed and stats.tested >= quota
        detail = (
            f"{stats.tested} instances ({stats.drawn} drawn), {len(stats.fails)} fails, "
            f"{stats.equality_cases - len(stats.equality_failures)}/{stats.equality_cases} equality cases tight"
        )
        if stats.fails:
            detail += f"; first fail {stats.fails[0]}"
        if stats.equality_failures:
            detail += f"; first loose equality {stats.equality_failures[0]}"
        cases.append(CaseResult(stats.ident.value, ok, detail))
    return SuiteReport("property", tuple(cases), seed)


def run_suite(name: str, seed: int = 0) -> SuiteReport:
    if name == "paper":
        return run_reference()
    if name == "property":
        return run_property(seed)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
