"""Report types for condition checks and classifications."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from jclass_interface.carrier import CompactWindow


class ConditionId(StrEnum):
    """The decay conditions the checkers know about."""

    NECESSARY_APERIODIC = "NecessaryAperiodic"
    SUFFICIENT_PAIR = "SufficientPair"
    TORSION_CONDITION = "TorsionCondition"
    ZERO_J_EQUIVALENCE = "ZeroJEquivalence"
    POWER_BOUNDED = "PowerBounded"


class ReportVerdict(StrEnum):
    """Outcome of a single condition check."""

    HOLDS = "Holds"
    FAILS_UP_TO_BOUND = "FailsUpToBound"
    NOT_APPLICABLE = "NotApplicable"


class Classification(StrEnum):
    """Aggregate conclusion about the operator."""

    J_CLASS_AT_ZERO = "JClassAtZero"
    J_CLASS_WITH_INDICATOR_VECTOR = "JClassWithIndicatorVector"
    POWER_BOUNDED_NOT_J_CLASS = "PowerBoundedNotJClass"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class WindowWitness:
    """One candidate power n with its exceptional-set filtering.

    window is the retained set E; achieved_ess_sup is the largest product value on E (on the whole probe
    window when E is empty); residual_mass is the measure of the probe window outside E.
    """

    n: int
    window: CompactWindow
    achieved_ess_sup: float
    residual_mass: float
    k_side_sup: float | None = None


@dataclass(frozen=True)
class ConditionReport:
    """Result of one checker run.

    For the sublevel conditions a HOLDS verdict carries only successful witnesses, the first one being
    the smallest successful n. A FAILS_UP_TO_BOUND verdict carries the best candidates found instead.
    """

    condition_id: ConditionId
    verdict: ReportVerdict
    witnesses: tuple[WindowWitness, ...]
    search_bound: int
    epsilon: float
    delta: float
    probe: CompactWindow | None = None
    trend_to_zero: bool = False
    max_value: float | None = None
    detail: str = ""

    @property
    def holds(self) -> bool:
        """Return True for a HOLDS verdict."""
        return self.verdict is ReportVerdict.HOLDS

    @property
    def first_success(self) -> WindowWitness | None:
        """Return the smallest successful witness, if any."""
        return self.witnesses[0] if self.holds and self.witnesses else None

    def summary(self) -> str:
        """Return a one-line description."""
        parts = [f"{self.condition_id}: {self.verdict}"]
        if self.probe is not None:
            parts.append(f"on {self.probe}")
        best = self.witnesses[0] if self.witnesses else None
        if best is not None:
            text = f"n={best.n} sup={best.achieved_ess_sup:.6g} residual={best.residual_mass:.6g}"
            if best.k_side_sup is not None:
                text += f" K-side={best.k_side_sup:.6g}"
            parts.append(text)
        if self.max_value is not None:
            parts.append(f"max={self.max_value:.6g}")
        if self.trend_to_zero:
            parts.append("(decreasing trend over the last successes)")
        if self.detail:
            parts.append(f"[{self.detail}]")
        return " ".join(parts)


@dataclass(frozen=True)
class Verdict:
    """A classification with the reports that imply it."""

    classification: Classification
    supporting_reports: tuple[ConditionReport, ...]
    indicator_window: CompactWindow | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def label(self) -> str:
        """Return e.g. 'JClassWithIndicatorVector(K=[0, 5])'."""
        if self.indicator_window is not None:
            return f"{self.classification}(K={self.indicator_window})"
        return str(self.classification)
