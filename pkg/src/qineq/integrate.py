"""The four q-integral kinds, a classical quadrature oracle, and numerical
checks of the identities linking the kinds.

Kinds (``q`` in (0, 1) throughout):

* ``JACKSON0``    b(1-q) sum_k f(b q^k) q^k                        over [0, b]
* ``JACKSON_AB``  (1-q) sum_k (b f(b q^k) - a f(a q^k)) q^k        over [a, b]
* ``RESTRICTED``  b(1-q) sum_{k<n} f(b q^k) q^k, lower end a = b q^n
* ``RIEMANN``     (b-a)(1-q) sum_k f(a + (b-a) q^k) q^k             over [a, b]

``JACKSON_AB`` is summed as one merged series rather than as the difference
of two truncated ones, which keeps cancellation under control.  It still
samples f on [0, a), so integrands undefined there (``ln(x-1)`` on [2, 3])
fail with a domain error while the Riemann kind does not.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from qineq.core import (
    Func,
    Interval,
    as_q,
    breve_transform,
    hat_transform,
    product,
    q_bracket,
    tilde_transform,
)
from qineq.expr import EvalError

SLOW_Q = 0.999


class IntegralKind(str, Enum):
    JACKSON0 = "jackson0"
    JACKSON_AB = "jackson-ab"
    RESTRICTED = "restricted"
    RIEMANN = "riemann"


@dataclass(frozen=True)
class QIntegralSpec:
    """Which integral, over what.  For ``RESTRICTED`` the lower endpoint is
    derived as b q^n and cannot be set independently."""

    kind: IntegralKind
    b: float
    a: float = 0.0
    n: Optional[int] = None

    def __post_init__(self):
        kind = IntegralKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not (math.isfinite(self.b) and self.b > 0.0):
            raise ValueError(f"b must be positive, got {self.b!r}")
        if kind is IntegralKind.RESTRICTED:
            if self.n is None or int(self.n) != self.n or self.n < 1:
                raise ValueError("restricted integral requires an integer n >= 1")
            if self.a != 0.0:
                raise ValueError("restricted integral derives a = b q^n; do not set a")
        elif self.n is not None:
            raise ValueError(f"n is only meaningful for the restricted kind, not {kind.value}")
        if kind is IntegralKind.JACKSON0 and self.a != 0.0:
            raise ValueError("jackson0 integrates over [0, b]; a must be 0")
        if not (0.0 <= self.a < self.b):
            raise ValueError(f"need 0 <= a < b, got a={self.a!r}, b={self.b!r}")

    @classmethod
    def jackson0(cls, b: float) -> QIntegralSpec:
        return cls(IntegralKind.JACKSON0, b)

    @classmethod
    def jackson_ab(cls, a: float, b: float) -> QIntegralSpec:
        return cls(IntegralKind.JACKSON_AB, b, a)

    @classmethod
    def restricted(cls, b: float, n: int) -> QIntegralSpec:
        return cls(IntegralKind.RESTRICTED, b, 0.0, n)

    @classmethod
    def riemann(cls, a: float, b: float) -> QIntegralSpec:
        return cls(IntegralKind.RIEMANN, b, a)

    def lower(self, q: float) -> float:
        """The lower endpoint a_(J) of the integration interval."""
        if self.kind is IntegralKind.RESTRICTED:
            return self.b * as_q(q) ** self.n
        return self.a

    def width(self, q: float) -> float:
        return self.b - self.lower(q)

    def interval(self, q: float) -> Interval:
        return Interval(self.lower(q), self.b)

    def with_kind(self, kind: IntegralKind) -> QIntegralSpec:
        return QIntegralSpec(kind, self.b, self.a, self.n)

    def describe(self) -> dict:
        d: dict = {"kind": self.kind.value, "b": self.b}
        if self.kind is IntegralKind.RESTRICTED:
            d["n"] = self.n
        elif self.kind is not IntegralKind.JACKSON0:
            d["a"] = self.a
        return d


@dataclass(frozen=True)
class TruncationPolicy:
    rtol: float = 1e-12
    atol: float = 1e-14
    consecutive_small: int = 3
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("rtol and atol must be positive")
        if self.consecutive_small < 1 or self.max_terms < 1:
            raise ValueError("consecutive_small and max_terms must be >= 1")


DEFAULT_POLICY = TruncationPolicy()


class Status(str, Enum):
    CONVERGED = "CONVERGED"
    MAX_TERMS_REACHED = "MAX_TERMS_REACHED"
    DOMAIN_ERROR = "DOMAIN_ERROR"


@dataclass(frozen=True)
class IntegralResult:
    value: float
    terms_used: int
    tail_bound_estimate: float
    status: Status
    error: Optional[EvalError] = None
    diagnostics: tuple[str, ...] = ()

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def as_dict(self) -> dict:
        d = {
            "value": _num(self.value),
            "terms_used": self.terms_used,
            "tail_bound_estimate": _num(self.tail_bound_estimate),
            "status": self.status.value,
        }
        if self.error is not None:
            d["error"] = {
                "type": type(self.error).__name__,
                "point": self.error.point,
                "reason": self.error.reason,
                "subexpr": self.error.subexpr,
            }
        if self.diagnostics:
            d["diagnostics"] = list(self.diagnostics)
        return d


def _num(v: float) -> Optional[float]:
    return v if math.isfinite(v) else None


class IntegrationError(ArithmeticError):
    """Raised by :func:`qint` when an integral cannot be evaluated."""

    def __init__(self, result: IntegralResult):
        self.result = result
        if result.error is not None:
            msg = f"{result.status.value}: {result.error}"
        else:
            msg = f"{result.status.value} after {result.terms_used} terms"
        super().__init__(msg)


class NonConvergence(ArithmeticError):
    pass


# --------------------------------------------------------------------------
# Series summation
# --------------------------------------------------------------------------


def _sum_series(
    term: Callable[[int], float], q: float, policy: TruncationPolicy
) -> IntegralResult:
    """Neumaier-compensated summation of term(0) + term(1) + ... with the
    consecutive-small-terms stopping rule."""
    envelope = q / (1.0 - q)
    growth = max(1.0, envelope)
    diagnostics = ()
    if q >= SLOW_Q:
        diagnostics = (f"slow convergence expected for q={q!r}",)
    s = 0.0
    comp = 0.0
    run = 0
    t = 0.0
    k = 0
    try:
        for k in range(policy.max_terms):
            t = term(k)
            u = s + t
            if abs(s) >= abs(t):
                comp += (s - u) + t
            else:
                comp += (t - u) + s
            s = u
            if abs(t) * growth <= policy.atol + policy.rtol * abs(s + comp):
                run += 1
                if run >= policy.consecutive_small:
                    return IntegralResult(
                        s + comp, k + 1, abs(t) * envelope, Status.CONVERGED, None, diagnostics
                    )
            else:
                run = 0
    except EvalError as exc:
        return IntegralResult(math.nan, k, math.nan, Status.DOMAIN_ERROR, exc, diagnostics)
    return IntegralResult(
        s + comp, policy.max_terms, abs(t) * envelope, Status.MAX_TERMS_REACHED, None, diagnostics
    )


def integrate(
    f: Func,
    spec: QIntegralSpec,
    q: float,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> IntegralResult:
    """Evaluate the q-integral of ``f`` described by ``spec``."""
    q = as_q(q)
    a, b = spec.a, spec.b
    scale = 1.0 - q
    if spec.kind is IntegralKind.RESTRICTED:
        terms = []
        try:
            for k in range(spec.n):
                qk = q**k
                terms.append(b * scale * f(b * qk) * qk)
        except EvalError as exc:
            return IntegralResult(math.nan, len(terms), math.nan, Status.DOMAIN_ERROR, exc)
        return IntegralResult(math.fsum(terms), spec.n, 0.0, Status.CONVERGED)

    if spec.kind is IntegralKind.JACKSON0:
        c = b * scale

        def term(k: int) -> float:
            qk = q**k
            return c * f(b * qk) * qk

    elif spec.kind is IntegralKind.JACKSON_AB:
        if a == 0.0:

            def term(k: int) -> float:
                qk = q**k
                return scale * b * f(b * qk) * qk

        else:

            def term(k: int) -> float:
                qk = q**k
                return scale * (b * f(b * qk) - a * f(a * qk)) * qk

    else:
        w = b - a
        c = w * scale

        def term(k: int) -> float:
            qk = q**k
            return c * f(a + w * qk) * qk

    return _sum_series(term, q, policy)


def qint(f: Func, spec: QIntegralSpec, q: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Like :func:`integrate` but returns the value, raising
    :class:`IntegrationError` unless the series converged."""
    res = integrate(f, spec, q, policy)
    if res.status is not Status.CONVERGED:
        raise IntegrationError(res)
    return res.value


def jackson0_terms(f: Func, b: float, q: float, count: int) -> list[float]:
    """The first ``count`` weighted terms b(1-q) f(b q^k) q^k."""
    q = as_q(q)
    return [b * (1.0 - q) * f(b * q**k) * q**k for k in range(count)]


# --------------------------------------------------------------------------
# Closed form and classical oracle
# --------------------------------------------------------------------------


def monomial_closed_form(n: int, iv: Interval, q: float) -> float:
    """(b^(n+1) - a^(n+1)) / [n+1]_q, the q-integral of x^n over [a, b]."""
    return (iv.b ** (n + 1) - iv.a ** (n + 1)) / q_bracket(n + 1, q)


def classical_integral(f: Func, iv: Interval, tol: float = 1e-10, max_depth: int = 50) -> float:
    """Adaptive Simpson quadrature of f over [a, b] to absolute tolerance."""
    a, b = iv.a, iv.b

    def simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 6.0 * (fa + 4.0 * fm + fb)

    def step(lo, hi, flo, fmid, fhi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = simpson(flo, flm, fmid, mid - lo)
        right = simpson(fmid, frm, fhi, hi - mid)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth >= max_depth:
            raise NonConvergence(f"adaptive Simpson exceeded depth {max_depth} near x={mid!r}")
        return step(lo, mid, flo, flm, fmid, left, tol / 2.0, depth + 1) + step(
            mid, hi, fmid, frm, fhi, right, tol / 2.0, depth + 1
        )

    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    return step(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0)


# --------------------------------------------------------------------------
# Correlations between the kinds
# --------------------------------------------------------------------------

CORRELATION_TOL = 1e-9
RELATION_NAMES = ("restricted_limit", "ab_tilde", "riemann_hat", "riemann_hat_product", "ab_product")


class RelationStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    UNTESTABLE = "UNTESTABLE"


@dataclass(frozen=True)
class RelationCheck:
    name: str
    description: str
    status: RelationStatus
    lhs: float = math.nan
    rhs: float = math.nan
    error: float = math.nan
    tolerance: float = math.nan
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "status": self.status.value,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "error": _num(self.error),
            "tolerance": _num(self.tolerance),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class CorrelationReport:
    checks: tuple[RelationCheck, ...] = field(default_factory=tuple)

    def __getitem__(self, name: str) -> RelationCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def all_pass(self) -> bool:
        return all(c.status is RelationStatus.PASS for c in self.checks)


def _compare(name: str, desc: str, lhs: float, rhs: float, extra_scale: float = 0.0) -> RelationCheck:
    scale = max(1.0, abs(lhs), abs(rhs), extra_scale)
    tol = CORRELATION_TOL * scale
    err = abs(lhs - rhs)
    status = RelationStatus.PASS if err <= tol else RelationStatus.FAIL
    return RelationCheck(name, desc, status, lhs, rhs, err, tol)


def _untestable(name: str, desc: str, exc: Exception) -> RelationCheck:
    return RelationCheck(name, desc, RelationStatus.UNTESTABLE, detail=str(exc))


def _check_restricted_limit(f: Func, iv: Interval, q: float, n_max: Optional[int], policy) -> RelationCheck:
    name, desc = "restricted_limit", "G_q(f; b q^n, b) -> I_q(f; 0, b)"
    b = iv.b
    try:
        full = qint(f, QIntegralSpec.jackson0(b), q, policy)
        if n_max is None:
            n_max = min(policy.max_terms, math.ceil(math.log(1e-16) / math.log(q)) + 1)
        values = [abs(f(b * q**k)) for k in range(n_max + 1)]
        # suffix maxima bound the omitted tail: |I - G_n| <= b q^n sup_{k>=n} |f(b q^k)|
        sup = values[:]
        for k in range(len(sup) - 2, -1, -1):
            sup[k] = max(sup[k], sup[k + 1])
        ns = sorted({1, n_max} | {2**j for j in range(1, n_max.bit_length()) if 2**j < n_max})
        g_last = math.nan
        for n in ns:
            g_last = qint(f, QIntegralSpec.restricted(b, n), q, policy)
            err = abs(g_last - full)
            bound = b * q**n * sup[min(n, len(sup) - 1)]
            if err > bound + CORRELATION_TOL * max(1.0, abs(full)):
                return RelationCheck(
                    name, desc, RelationStatus.FAIL, g_last, full, err, bound,
                    detail=f"error at n={n} exceeds the tail envelope",
                )
    except (EvalError, IntegrationError) as exc:
        return _untestable(name, desc, exc)
    check = _compare(name, desc, g_last, full)
    return RelationCheck(
        check.name, check.description, check.status, check.lhs, check.rhs, check.error,
        check.tolerance, detail=f"n_max={n_max}",
    )


def verify_correlations(
    f: Func,
    iv: Interval,
    q: float,
    g: Optional[Func] = None,
    n_max: Optional[int] = None,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> CorrelationReport:
    """Numerically check the five identities linking the integral kinds.

    ``g`` is the second factor for the product identities; it defaults to f.
    Each relation is reported PASS/FAIL at 1e-9 relative to the magnitudes
    involved, or UNTESTABLE when one of its integrals cannot be evaluated.
    """
    q = as_q(q)
    g = f if g is None else g
    a, b = iv.a, iv.b
    w = b - a
    unit = QIntegralSpec.jackson0(1.0)
    checks = [_check_restricted_limit(f, iv, q, n_max, policy)]

    desc = "I_q(f; a, b) = I_q(tilde f; 0, 1)"
    try:
        lhs = qint(f, QIntegralSpec.jackson0(b), q, policy)
        if a > 0.0:
            lhs -= qint(f, QIntegralSpec.jackson0(a), q, policy)
        rhs = qint(tilde_transform(f, iv), unit, q, policy)
        checks.append(_compare("ab_tilde", desc, lhs, rhs))
    except (EvalError, IntegrationError) as exc:
        checks.append(_untestable("ab_tilde", desc, exc))

    desc = "R_q(f; a, b) = (b - a) I_q(hat f; 0, 1)"
    try:
        lhs = qint(f, QIntegralSpec.riemann(a, b), q, policy)
        rhs = w * qint(hat_transform(f, iv), unit, q, policy)
        checks.append(_compare("riemann_hat", desc, lhs, rhs))
    except (EvalError, IntegrationError) as exc:
        checks.append(_untestable("riemann_hat", desc, exc))

    desc = "R_q(fg; a, b) = (b - a) I_q(hat f hat g; 0, 1)"
    try:
        lhs = qint(product(f, g), QIntegralSpec.riemann(a, b), q, policy)
        rhs = w * qint(product(hat_transform(f, iv), hat_transform(g, iv)), unit, q, policy)
        checks.append(_compare("riemann_hat_product", desc, lhs, rhs))
    except (EvalError, IntegrationError) as exc:
        checks.append(_untestable("riemann_hat_product", desc, exc))

    desc = "I_q(fg; a, b) = (I_q(tilde f tilde g) - ab I_q(breve f breve g)) / (b - a)"
    try:
        lhs = qint(product(f, g), QIntegralSpec.jackson_ab(a, b), q, policy)
        tt = qint(product(tilde_transform(f, iv), tilde_transform(g, iv)), unit, q, policy)
        bb = qint(product(breve_transform(f, iv), breve_transform(g, iv)), unit, q, policy)
        rhs = (tt - a * b * bb) / w
        checks.append(_compare("ab_product", desc, lhs, rhs, extra_scale=max(abs(tt), abs(a * b * bb)) / w))
    except (EvalError, IntegrationError) as exc:
        checks.append(_untestable("ab_product", desc, exc))

    return CorrelationReport(tuple(checks))
