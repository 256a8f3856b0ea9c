"""Randomized property suite: every inequality on catalog inputs.

Instances are drawn from polynomials with positive coefficients,
exp(alpha x) and x + c.  Only instances whose hypotheses are met
(verdict HOLDS or FAILS) count toward the quota; a single FAILS among
them is a bug.  Each id also gets a handful of equality cases (constants,
proportional pairs, p = 1) whose slack must vanish within the verdict
tolerance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from qineq.core import ConjugatePair, HypothesisParams
from qineq.expr import Expression, parse
from qineq.ineq import HH_VARIANTS, InequalityId, InequalityVerdict, Verdict, run_check
from qineq.integrate import IntegralKind, QIntegralSpec

DEFAULT_QUOTA = 500
ATTEMPT_FACTOR = 12
Q_RANGE = (0.2, 0.8)

_TWO_FUNCTION_FREE = frozenset({InequalityId.SCHWARZ_COR_65, InequalityId.POWER_MEAN_COR_67}) | frozenset(HH_VARIANTS)


@dataclass(frozen=True)
class Instance:
    ident: InequalityId
    f: Expression
    g: Optional[Expression]
    spec: QIntegralSpec
    q: float
    params: HypothesisParams = field(default_factory=HypothesisParams)
    pair: Optional[ConjugatePair] = None

    def run(self) -> InequalityVerdict:
        return run_check(self.ident, self.f, self.g, self.spec, self.q, self.params, pair=self.pair)

    def describe(self) -> str:
        g = "" if self.g is None else f", g={self.g.source}"
        return f"{self.ident.value}: f={self.f.source}{g}, {self.spec.describe()}, q={self.q:.6g}"


@dataclass
class IdStats:
    ident: InequalityId
    tested: int = 0
    drawn: int = 0
    fails: list[str] = field(default_factory=list)
    equality_cases: int = 0
    equality_failures: list[str] = field(default_factory=list)
    max_ratio: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.fails and not self.equality_failures

    def as_dict(self) -> dict:
        return {
            "id": self.ident.value,
            "tested": self.tested,
            "drawn": self.drawn,
            "fails": len(self.fails),
            "first_fail": self.fails[0] if self.fails else None,
            "equality_cases": self.equality_cases,
            "equality_failures": len(self.equality_failures),
            "first_equality_failure": self.equality_failures[0] if self.equality_failures else None,
        }


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------


def _c(rng: random.Random, lo: float, hi: float) -> float:
    return round(rng.uniform(lo, hi), 3)


def _polynomial(rng: random.Random) -> str:
    degree = rng.randint(1, 3)
    terms = [f"{_c(rng, 0.1, 2.0)}"]
    for k in range(1, degree + 1):
        coef = _c(rng, 0.0, 2.0)
        if coef > 0.0:
            terms.append(f"{coef}*x" if k == 1 else f"{coef}*x^{k}")
    return " + ".join(terms)


def _exponential(rng: random.Random) -> str:
    alpha = _c(rng, -1.5, 1.5) or 0.5
    return f"exp({alpha}*x)"


def _shift(rng: random.Random) -> str:
    return f"x + {_c(rng, 0.1, 3.0)}"


def catalog_function(rng: random.Random) -> Expression:
    return parse(rng.choice((_polynomial, _exponential, _shift))(rng))


def _generic_spec(rng: random.Random) -> QIntegralSpec:
    kind = rng.choice((IntegralKind.JACKSON0, IntegralKind.RESTRICTED, IntegralKind.RIEMANN))
    b = _c(rng, 0.5, 3.0)
    if kind is IntegralKind.JACKSON0:
        return QIntegralSpec.jackson0(b)
    if kind is IntegralKind.RESTRICTED:
        return QIntegralSpec.restricted(b, rng.randint(1, 12))
    return QIntegralSpec.riemann(_c(rng, 0.0, 0.8 * b), b)


def _ab_spec(rng: random.Random) -> QIntegralSpec:
    a = _c(rng, 0.1, 2.0)
    return QIntegralSpec.jackson_ab(a, round(a + rng.uniform(0.3, 2.0), 3))


def _spec_for(ident: InequalityId, rng: random.Random) -> QIntegralSpec:
    kind = HH_VARIANTS.get(ident)
    if kind is IntegralKind.RESTRICTED:
        return QIntegralSpec.restricted(_c(rng, 0.5, 3.0), rng.randint(1, 12))
    if kind is IntegralKind.JACKSON0:
        return QIntegralSpec.jackson0(_c(rng, 0.5, 3.0))
    if kind is IntegralKind.RIEMANN:
        b = _c(rng, 0.5, 3.0)
        return QIntegralSpec.riemann(_c(rng, 0.0, 0.8 * b), b)
    if kind is IntegralKind.JACKSON_AB or ident.value.startswith(("CHEBYSHEV_AB", "GRUSS_AB")):
        return _ab_spec(rng)
    return _generic_spec(rng)


def _exponent(ident: InequalityId, rng: random.Random) -> Optional[float]:
    if ident is InequalityId.LAH_RIBARIC_68_P2:
        return 2.0
    if ident in (InequalityId.JENSEN_POWER_66, InequalityId.POWER_MEAN_COR_67, InequalityId.LAH_RIBARIC_68):
        return rng.choice((_c(rng, -2.0, -0.1), _c(rng, 0.1, 0.9), _c(rng, 1.1, 3.0)))
    return None


def random_instance(ident: InequalityId, rng: random.Random) -> Instance:
    f = catalog_function(rng)
    g = None if ident in _TWO_FUNCTION_FREE else catalog_function(rng)
    spec = _spec_for(ident, rng)
    q = round(rng.uniform(*Q_RANGE), 4)
    p = _exponent(ident, rng)
    params = HypothesisParams.of(p=p)
    pair = ConjugatePair.from_alpha(_c(rng, 1.1, 4.0)) if ident.value.startswith("YOUNG") else None
    return Instance(ident, f, g, spec, q, params, pair)


def equality_instances(ident: InequalityId, rng: random.Random) -> list[Instance]:
    """Inputs on which ``ident`` holds with equality; empty where no
    catalog input is an equality case with all hypotheses met."""
    q = round(rng.uniform(*Q_RANGE), 4)
    spec = _spec_for(ident, rng)
    name = ident.value
    c = _c(rng, 0.5, 2.0)
    const, one = parse(f"{c}"), parse("1")
    shift = parse(f"x + {c}")
    if name.startswith("CHEBYSHEV_AB"):
        return []
    if ident in HH_VARIANTS:
        return [Instance(ident, parse(f"{c}*x + 1"), None, spec, q)]
    if name.startswith("YOUNG"):
        return [Instance(ident, one, one, spec, q, pair=ConjugatePair.from_alpha(_c(rng, 1.1, 4.0)))]
    if name.startswith("CASSELS") or name.startswith("LAH"):
        p = 2.0 if name.startswith("LAH") else None
        return [Instance(ident, shift, parse(f"2*(x + {c})"), spec, q, HypothesisParams.of(p=p))]
    if name.startswith("BOUNDED"):
        return [Instance(ident, const, parse("2"), spec, q)]
    if ident is InequalityId.SCHWARZ_COR_65:
        return [Instance(ident, const, None, spec, q)]
    if ident is InequalityId.JENSEN_POWER_66:
        return [Instance(ident, shift, parse("x + 2"), spec, q, HypothesisParams.of(p=1.0))]
    if ident is InequalityId.POWER_MEAN_COR_67:
        return [Instance(ident, shift, None, spec, q, HypothesisParams.of(p=1.0))]
    # Chebyshev and Grüss: a constant factor
    return [Instance(ident, const, shift, spec, q)]


# --------------------------------------------------------------------------
# runner
# --------------------------------------------------------------------------


def run_id(ident: InequalityId, seed: int = 0, quota: int = DEFAULT_QUOTA) -> IdStats:
    rng = random.Random(f"{seed}:{ident.value}")
    stats = IdStats(ident)
    while stats.tested < quota and stats.drawn < ATTEMPT_FACTOR * quota:
        inst = random_instance(ident, rng)
        stats.drawn += 1
        v = inst.run()
        if v.verdict not in (Verdict.HOLDS, Verdict.FAILS):
            continue
        stats.tested += 1
        if v.verdict is Verdict.FAILS:
            stats.fails.append(f"{inst.describe()} slack={v.slack:.6g}")
        if ident is InequalityId.GRUSS_41 and v.rhs > 0:
            stats.max_ratio = max(stats.max_ratio, v.lhs / v.rhs)
    for inst in equality_instances(ident, rng):
        v = inst.run()
        stats.equality_cases += 1
        if v.verdict is not Verdict.HOLDS or abs(v.slack) > v.tolerance:
            stats.equality_failures.append(f"{inst.describe()} verdict={v.verdict.value} slack={v.slack:.6g}")
    return stats


def run_all(seed: int = 0, quota: int = DEFAULT_QUOTA) -> list[IdStats]:
    return [run_id(ident, seed, quota) for ident in InequalityId]
