"""Verdict records shared by every inequality checker."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from qineq.core import Constant

VERDICT_RTOL = 1e-9


class InequalityId(str, Enum):
    CHEBYSHEV_31 = "CHEBYSHEV_31"
    CHEBYSHEV_AB_A = "CHEBYSHEV_AB_A"
    CHEBYSHEV_AB_B = "CHEBYSHEV_AB_B"
    GRUSS_41 = "GRUSS_41"
    GRUSS_AB_42 = "GRUSS_AB_42"
    HH_RESTRICTED_51 = "HH_RESTRICTED_51"
    HH_JACKSON0_52 = "HH_JACKSON0_52"
    HH_RIEMANN_53 = "HH_RIEMANN_53"
    HH_JACKSON_AB_55 = "HH_JACKSON_AB_55"
    HH_COR_56 = "HH_COR_56"
    YOUNG_61_I = "YOUNG_61_I"
    YOUNG_61_II = "YOUNG_61_II"
    YOUNG_61_III = "YOUNG_61_III"
    YOUNG_61_IV = "YOUNG_61_IV"
    YOUNG_62_I = "YOUNG_62_I"
    YOUNG_62_II = "YOUNG_62_II"
    YOUNG_62_III = "YOUNG_62_III"
    CASSELS_63_I = "CASSELS_63_I"
    CASSELS_63_II = "CASSELS_63_II"
    CASSELS_63_III = "CASSELS_63_III"
    BOUNDED_64_I = "BOUNDED_64_I"
    BOUNDED_64_II = "BOUNDED_64_II"
    BOUNDED_64_III = "BOUNDED_64_III"
    SCHWARZ_COR_65 = "SCHWARZ_COR_65"
    JENSEN_POWER_66 = "JENSEN_POWER_66"
    POWER_MEAN_COR_67 = "POWER_MEAN_COR_67"
    LAH_RIBARIC_68 = "LAH_RIBARIC_68"
    LAH_RIBARIC_68_P2 = "LAH_RIBARIC_68_P2"

    @classmethod
    def parse(cls, text: str) -> InequalityId:
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ValueError(f"unknown inequality id {text!r}") from None


class Verdict(str, Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    VACUOUS = "VACUOUS"
    UNTESTABLE = "UNTESTABLE"


class HypStatus(str, Enum):
    SATISFIED = "SATISFIED"
    VIOLATED = "VIOLATED"
    ESTIMATED = "ESTIMATED"
    UNCHECKED = "UNCHECKED"


class KindNotPermitted(ValueError):
    """The requested integral kind is outside the theorem's scope."""


@dataclass(frozen=True)
class Hypothesis:
    name: str
    status: HypStatus
    detail: str = ""
    witness: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.status in (HypStatus.SATISFIED, HypStatus.ESTIMATED)

    def as_dict(self) -> dict:
        d: dict[str, Any] = {"name": self.name, "status": self.status.value}
        if self.detail:
            d["detail"] = self.detail
        if self.witness is not None:
            d["witness"] = _num(self.witness)
        return d


def tolerance_for(lhs: float, rhs: float) -> float:
    return VERDICT_RTOL * max(1.0, abs(lhs), abs(rhs))


@dataclass(frozen=True)
class Side:
    """One inequality ``lhs <relation> rhs``; slack >= 0 means it holds."""

    name: str
    lhs: float
    rhs: float
    relation: str  # "<=" or ">="

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs if self.relation == "<=" else self.lhs - self.rhs

    @property
    def tolerance(self) -> float:
        return tolerance_for(self.lhs, self.rhs)

    @property
    def holds(self) -> bool:
        return self.slack >= -self.tolerance

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": _num(self.lhs),
            "relation": self.relation,
            "rhs": _num(self.rhs),
            "slack": _num(self.slack),
            "tolerance": _num(self.tolerance),
        }


@dataclass(frozen=True)
class InequalityVerdict:
    id: InequalityId
    integral_kind: str
    inputs: dict[str, Any]
    hypotheses: tuple[Hypothesis, ...]
    sides: tuple[Side, ...]
    verdict: Verdict
    constants: dict[str, Constant] = field(default_factory=dict)
    note: str = ""

    def _binding(self) -> Optional[Side]:
        finite = [s for s in self.sides if math.isfinite(s.slack)]
        if not finite:
            return self.sides[0] if self.sides else None
        return min(finite, key=lambda s: s.slack / max(1.0, abs(s.lhs), abs(s.rhs)))

    @property
    def lhs(self) -> float:
        s = self._binding()
        return math.nan if s is None else s.lhs

    @property
    def rhs(self) -> float:
        s = self._binding()
        return math.nan if s is None else s.rhs

    @property
    def slack(self) -> float:
        s = self._binding()
        return math.nan if s is None else s.slack

    @property
    def tolerance(self) -> float:
        s = self._binding()
        return math.nan if s is None else s.tolerance

    def side(self, name: str) -> Side:
        for s in self.sides:
            if s.name == name:
                return s
        raise KeyError(name)

    def hypothesis(self, name: str) -> Hypothesis:
        for h in self.hypotheses:
            if h.name == name:
                return h
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "id": self.id.value,
            "integral_kind": self.integral_kind,
            "inputs": self.inputs,
            "hypotheses": [h.as_dict() for h in self.hypotheses],
            "constants": {
                k: {"value": _num(c.value), "source": c.tag()} for k, c in self.constants.items()
            },
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "slack": _num(self.slack),
            "tolerance": _num(self.tolerance),
            "sides": [s.as_dict() for s in self.sides],
            "verdict": self.verdict.value,
            "note": self.note,
        }


def decide(hypotheses, sides) -> Verdict:
    if any(h.status is HypStatus.VIOLATED for h in hypotheses):
        return Verdict.VACUOUS
    if not sides or any(not math.isfinite(s.slack) for s in sides):
        return Verdict.UNTESTABLE
    if not all(h.ok for h in hypotheses):
        return Verdict.UNTESTABLE
    return Verdict.HOLDS if all(s.holds for s in sides) else Verdict.FAILS


def _num(v: float) -> Optional[float]:
    return v if math.isfinite(v) else None
