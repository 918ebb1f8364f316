"""Condition checkers for weighted translations.

Every checker scans n = 1..n_max deterministically. For each n the exceptional set is chosen as a
sublevel set of the relevant weight product,

    E_n = {k in window : product_n(k) < ε},

and the condition holds at n when E_n is nonempty and the window outside E_n has measure below δ.
All comparisons happen in log space; products are only exponentiated for reporting.

    tilde decay      product_n = ω̃_n on Δ           (aperiodic / compact-passing a)
    sufficient pair  ω̃_n on Δ together with max_K ω_n < ε at the same n
    torsion          product_n = ω_n^{-1} on F       (finite cyclic carriers)
    power bounded    max_k ω_γ(k) <= 1               (no scan)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np

from jclass_criteria.reports import (
    Classification,
    ConditionId,
    ConditionReport,
    ReportVerdict,
    Verdict,
    WindowWitness,
)
from jclass_interface.carrier import CompactWindow
from jclass_interface.exceptions import CarrierMismatchError, EmptyWindowError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

    from jclass_interface.arrays import FloatArray, IndexArray
    from jclass_interface.carrier import GroupCarrier
    from lp_grid_impl.translation import WeightedTranslation

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-4
DEFAULT_DELTA_FRACTION = 1e-3
DEFAULT_N_MAX = 500

# Number of witnesses kept per report
WITNESS_COUNT = 5

# Successive successes whose achieved values must strictly decrease before a limit is suggested
TREND_LENGTH = 10

# log(max ω_γ) may exceed 0 by this much and still count as power bounded
POWER_BOUND_LOG_TOLERANCE = 1e-12

INTERIOR_POINT_NOTE = "0 is an interior point of J(0), which is equivalent to J(0) being the whole space"
POWER_BOUNDED_NOTE = "T is power bounded, so J(0) coincides with the limit set L(0) and is not the whole space"
NECESSARY_FAILS_NOTE = "the tilde decay fails on some probe window, so no J-vector exists within the search bound"


def default_delta(carrier: GroupCarrier, window: CompactWindow) -> float:
    """Return the default δ = 1e-3 · λ(window)."""
    return DEFAULT_DELTA_FRACTION * carrier.measure(window)


def _resolve_delta(carrier: GroupCarrier, window: CompactWindow, delta: float | None) -> float:
    if delta is not None:
        return delta
    return 0.0 if window.is_empty else default_delta(carrier, window)


def _validate(window: CompactWindow, epsilon: float, delta: float, n_max: int) -> None:
    if window.is_empty:
        msg = "empty window"
        raise EmptyWindowError(msg)
    if not (epsilon > 0 and delta > 0):
        msg = f"ε and δ must be positive, got ε={epsilon} δ={delta}"
        raise ValueError(msg)
    if n_max < 1:
        msg = f"n_max must be a positive integer, got {n_max}"
        raise ValueError(msg)


def _require_canonical(carrier: GroupCarrier, window: CompactWindow) -> None:
    # a window running past the last residue would count some cells twice
    if not carrier.contains_window(window):
        msg = f"window {window} is not a window of {carrier}; use indices 0..{(carrier.group_order or 0) - 1}"
        raise CarrierMismatchError(msg)


def _exp(log_value: float) -> float:
    return math.exp(log_value) if log_value < math.log(np.finfo(np.float64).max) else math.inf


# ---------------------------------------------------------------------------
# Sublevel scan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _SublevelScan:
    """Per-n filtering of one window against a threshold, vectorised over n."""

    indices: IndexArray
    below: NDArray[np.bool_]
    residual: FloatArray
    achieved_log: FloatArray
    success: NDArray[np.bool_]
    k_side_log: FloatArray | None

    @classmethod
    def run(
        cls,
        indices: IndexArray,
        masses: FloatArray,
        logs: FloatArray,
        log_threshold: float,
        delta: float,
        *,
        k_side_log: FloatArray | None = None,
        k_log_threshold: float | None = None,
    ) -> _SublevelScan:
        """Filter every column of logs (cells x n) against log_threshold."""
        below = logs < log_threshold
        residual = masses @ (~below).astype(np.float64)
        nonempty = below.any(axis=0)
        # ess sup over E_n; falls back to the whole window when E_n is empty
        in_e = np.where(below, logs, -np.inf).max(axis=0)
        achieved_log = np.where(nonempty, in_e, logs.max(axis=0))
        success = nonempty & (residual < delta)
        # column 0 is n = 0, the identity, which never counts
        success[0] = False
        if k_side_log is not None and k_log_threshold is not None:
            success &= k_side_log < k_log_threshold
        return cls(indices, below, residual, achieved_log, success, k_side_log)

    @property
    def n_max(self) -> int:
        """Return the search bound the table was built for."""
        return len(self.residual) - 1

    def witness(self, n: int) -> WindowWitness:
        """Materialise the record for power n."""
        k_side = None if self.k_side_log is None else _exp(float(self.k_side_log[n]))
        return WindowWitness(
            n=n,
            window=CompactWindow.from_indices(self.indices[self.below[:, n]].tolist()),
            achieved_ess_sup=_exp(float(self.achieved_log[n])),
            residual_mass=float(self.residual[n]),
            k_side_sup=k_side,
        )

    def first_success(self) -> int | None:
        """Return the smallest successful n."""
        hits = np.flatnonzero(self.success)
        return int(hits[0]) if len(hits) else None

    def select(self) -> tuple[tuple[WindowWitness, ...], bool]:
        """Return the retained witnesses and the trend flag."""
        hits = np.flatnonzero(self.success)
        if len(hits):
            first = int(hits[0])
            others = sorted((int(n) for n in hits[1:]), key=lambda n: (self.achieved_log[n], n))
            chosen = [first, *others[: WITNESS_COUNT - 1]]
            tail = self.achieved_log[hits[-TREND_LENGTH:]]
            trend = len(hits) >= TREND_LENGTH and bool(np.all(np.diff(tail) < 0))
            return tuple(self.witness(n) for n in chosen), trend
        candidates = range(1, self.n_max + 1)
        ranked = sorted(candidates, key=lambda n: (self.residual[n], self.achieved_log[n], n))
        return tuple(self.witness(n) for n in ranked[:WITNESS_COUNT]), False


def _not_applicable(condition: ConditionId, epsilon: float, delta: float, n_max: int, reason: str) -> ConditionReport:
    logger.info("%s not applicable: %s", condition, reason)
    return ConditionReport(condition, ReportVerdict.NOT_APPLICABLE, (), n_max, epsilon, delta, detail=reason)


def _line_reason(operator: WeightedTranslation) -> str | None:
    if operator.carrier.is_finite:
        return "a is a torsion element on a finite carrier"
    if not operator.carrier.passes_through_compacts(operator.a):
        return "a is the identity and does not pass through compact sets"
    return None


def _finish(
    condition: ConditionId,
    scan: _SublevelScan,
    window: CompactWindow,
    epsilon: float,
    delta: float,
    n_max: int,
) -> ConditionReport:
    witnesses, trend = scan.select()
    verdict = ReportVerdict.HOLDS if scan.first_success() is not None else ReportVerdict.FAILS_UP_TO_BOUND
    report = ConditionReport(condition, verdict, witnesses, n_max, epsilon, delta, probe=window, trend_to_zero=trend)
    logger.info("%s", report.summary())
    return report


# ---------------------------------------------------------------------------
# Checkers
# ---------------------------------------------------------------------------


def check_tilde_decay(
    operator: WeightedTranslation,
    window: CompactWindow,
    epsilon: float = DEFAULT_EPSILON,
    delta: float | None = None,
    n_max: int = DEFAULT_N_MAX,
    *,
    condition: ConditionId = ConditionId.ZERO_J_EQUIVALENCE,
) -> ConditionReport:
    """Look for n <= n_max and E ⊆ Δ with λ(Δ∖E) < δ and max_E ω̃_n < ε.

    The same decay condition is both necessary for J-class behaviour under a compact-passing element
    and equivalent to J(0) being the whole space; condition records which of the two asked.

    Args:
        operator: The weighted translation.
        window: The compact probe window Δ.
        epsilon: Threshold on ω̃_n.
        delta: Allowed measure outside E; defaults to 1e-3 · λ(Δ).
        n_max: Search bound.
        condition: NECESSARY_APERIODIC or ZERO_J_EQUIVALENCE.

    Returns:
        The report; NOT_APPLICABLE on finite carriers or for the identity element.

    Raises:
        EmptyWindowError: If Δ is empty.

    """
    delta = _resolve_delta(operator.carrier, window, delta)
    _validate(window, epsilon, delta, n_max)
    reason = _line_reason(operator)
    if reason is not None:
        return _not_applicable(condition, epsilon, delta, n_max, reason)
    indices = window.indices()
    logs = operator.products.tilde_table(indices, n_max)
    scan = _SublevelScan.run(indices, operator.carrier.cell_masses(indices), logs, math.log(epsilon), delta)
    return _finish(condition, scan, window, epsilon, delta, n_max)


def check_sufficient_pair(
    operator: WeightedTranslation,
    window: CompactWindow,
    k_window: CompactWindow,
    epsilon: float = DEFAULT_EPSILON,
    delta: float | None = None,
    n_max: int = DEFAULT_N_MAX,
) -> ConditionReport:
    """Look for a single n satisfying the tilde decay on Δ and max_K ω_n < ε together.

    Raises:
        EmptyWindowError: If Δ or K is empty.

    """
    delta = _resolve_delta(operator.carrier, window, delta)
    _validate(window, epsilon, delta, n_max)
    if k_window.is_empty:
        msg = "empty window"
        raise EmptyWindowError(msg)
    reason = _line_reason(operator)
    if reason is not None:
        return _not_applicable(ConditionId.SUFFICIENT_PAIR, epsilon, delta, n_max, reason)
    indices = window.indices()
    logs = operator.products.tilde_table(indices, n_max)
    k_side = operator.products.forward_table(k_window.indices(), n_max).max(axis=0)
    scan = _SublevelScan.run(
        indices,
        operator.carrier.cell_masses(indices),
        logs,
        math.log(epsilon),
        delta,
        k_side_log=k_side,
        k_log_threshold=math.log(epsilon),
    )
    report = _finish(ConditionId.SUFFICIENT_PAIR, scan, window, epsilon, delta, n_max)
    return ConditionReport(
        report.condition_id,
        report.verdict,
        report.witnesses,
        report.search_bound,
        report.epsilon,
        report.delta,
        probe=report.probe,
        trend_to_zero=report.trend_to_zero,
        detail=f"K={k_window}",
    )


def check_torsion_condition(
    operator: WeightedTranslation,
    window: CompactWindow,
    epsilon: float = DEFAULT_EPSILON,
    delta: float | None = None,
    n_max: int = DEFAULT_N_MAX,
) -> ConditionReport:
    """Look for n <= n_max and E ⊆ F with λ(F∖E) < δ and max_E ω_n^{-1} < ε.

    Every n is scanned, not only multiples of the order of a.

    Raises:
        EmptyWindowError: If F is empty.
        CarrierMismatchError: If F holds indices outside 0..order-1.

    """
    delta = _resolve_delta(operator.carrier, window, delta)
    _validate(window, epsilon, delta, n_max)
    if not operator.carrier.is_finite:
        return _not_applicable(
            ConditionId.TORSION_CONDITION, epsilon, delta, n_max, "the carrier is torsion-free; a is not a torsion element"
        )
    _require_canonical(operator.carrier, window)
    indices = window.indices()
    # inverse products ω_n^{-1}(k) = exp(-log ω_n(k)); column n of the table is the n-step product
    logs = -operator.products.forward_table(indices, n_max)
    scan = _SublevelScan.run(indices, operator.carrier.cell_masses(indices), logs, math.log(epsilon), delta)
    return _finish(ConditionId.TORSION_CONDITION, scan, window, epsilon, delta, n_max)


def check_power_bounded_torsion(operator: WeightedTranslation) -> ConditionReport:
    """Compute max_k ω_γ(k) over the whole cycle; the operator is power bounded iff it is at most 1."""
    gamma = operator.torsion_order
    if not operator.carrier.is_finite or gamma is None:
        return _not_applicable(ConditionId.POWER_BOUNDED, math.nan, math.nan, 1, "a is not a torsion element")
    everything = np.arange(operator.carrier.group_order or 0, dtype=np.int64)
    top = float(np.max(operator.products.forward(everything, gamma)))
    verdict = ReportVerdict.HOLDS if top <= POWER_BOUND_LOG_TOLERANCE else ReportVerdict.FAILS_UP_TO_BOUND
    report = ConditionReport(
        ConditionId.POWER_BOUNDED,
        verdict,
        (),
        gamma,
        math.nan,
        math.nan,
        probe=CompactWindow.from_range(0, len(everything) - 1),
        max_value=_exp(top),
        detail=f"max of the full-cycle product over {gamma} steps",
    )
    logger.info("%s", report.summary())
    return report


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def classify(
    operator: WeightedTranslation,
    probe_windows: Sequence[CompactWindow],
    epsilon: float = DEFAULT_EPSILON,
    delta: float | None = None,
    n_max: int = DEFAULT_N_MAX,
    *,
    k_windows: Sequence[CompactWindow] = (),
) -> Verdict:
    """Aggregate the checkers into a classification.

    Line carriers with a compact-passing element: JClassWithIndicatorVector(K) when the sufficient pair
    holds on every probe window for some supplied K, else JClassAtZero when the tilde decay holds on every
    probe window. When K candidates are supplied the tilde decay is also reported as the necessary
    condition (NECESSARY_APERIODIC); if it fails on some window no K is tried. Finite cyclic carriers:
    JClassAtZero when the torsion condition holds on every probe window, else PowerBoundedNotJClass when
    max ω_γ <= 1. Anything else is Inconclusive, which only means that nothing was established within the
    search bound.

    Args:
        operator: The weighted translation.
        probe_windows: Nonempty list of windows of positive measure.
        epsilon: Product threshold.
        delta: Allowed exceptional measure; None means 1e-3 times the measure of each probe window.
        n_max: Search bound.
        k_windows: Candidate supports K for indicator J-vectors.

    Raises:
        ValueError: If no probe window is given.

    """
    if not probe_windows:
        msg = "classify needs at least one probe window"
        raise ValueError(msg)
    if operator.carrier.is_finite:
        return _classify_cycle(operator, probe_windows, epsilon, delta, n_max)
    if not operator.carrier.passes_through_compacts(operator.a):
        reports = tuple(check_tilde_decay(operator, w, epsilon, delta, n_max) for w in probe_windows)
        return _verdict(Classification.INCONCLUSIVE, reports, notes=("a does not pass through compact sets",))
    return _classify_line(operator, probe_windows, epsilon, delta, n_max, k_windows)


def _classify_cycle(
    operator: WeightedTranslation,
    probe_windows: Sequence[CompactWindow],
    epsilon: float,
    delta: float | None,
    n_max: int,
) -> Verdict:
    torsion = [check_torsion_condition(operator, w, epsilon, delta, n_max) for w in probe_windows]
    bounded = check_power_bounded_torsion(operator)
    reports = (*torsion, bounded)
    if all(r.holds for r in torsion):
        return _verdict(Classification.J_CLASS_AT_ZERO, reports, notes=(INTERIOR_POINT_NOTE,))
    if bounded.holds:
        return _verdict(Classification.POWER_BOUNDED_NOT_J_CLASS, reports, notes=(POWER_BOUNDED_NOTE,))
    return _verdict(Classification.INCONCLUSIVE, reports)


def _classify_line(
    operator: WeightedTranslation,
    probe_windows: Sequence[CompactWindow],
    epsilon: float,
    delta: float | None,
    n_max: int,
    k_windows: Sequence[CompactWindow],
) -> Verdict:
    tilde = tuple(check_tilde_decay(operator, w, epsilon, delta, n_max) for w in probe_windows)
    if not k_windows:
        if all(r.holds for r in tilde):
            return _verdict(Classification.J_CLASS_AT_ZERO, tilde, notes=(INTERIOR_POINT_NOTE,))
        return _verdict(Classification.INCONCLUSIVE, tilde)

    # the same scan doubles as the necessary condition for any J-vector; it is reported under both ids
    necessary = tuple(replace(r, condition_id=ConditionId.NECESSARY_APERIODIC) for r in tilde)
    if not all(r.holds for r in necessary):
        return _verdict(Classification.INCONCLUSIVE, (*necessary, *tilde), notes=(NECESSARY_FAILS_NOTE,))
    pair_reports: list[ConditionReport] = []
    for k_window in k_windows:
        pairs = [check_sufficient_pair(operator, w, k_window, epsilon, delta, n_max) for w in probe_windows]
        pair_reports.extend(pairs)
        if all(r.holds for r in pairs):
            notes = (f"χ_K is a J-vector for K={k_window}", INTERIOR_POINT_NOTE)
            return _verdict(
                Classification.J_CLASS_WITH_INDICATOR_VECTOR,
                (*necessary, *tilde, *pair_reports),
                indicator=k_window,
                notes=notes,
            )
    return _verdict(Classification.J_CLASS_AT_ZERO, (*necessary, *tilde, *pair_reports), notes=(INTERIOR_POINT_NOTE,))


def _verdict(
    classification: Classification,
    reports: tuple[ConditionReport, ...],
    *,
    indicator: CompactWindow | None = None,
    notes: tuple[str, ...] = (),
) -> Verdict:
    verdict = Verdict(classification, reports, indicator, notes)
    logger.info("Classification: %s", verdict.label)
    return verdict


# ---------------------------------------------------------------------------
# Decay profile (report data)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayRow:
    """Per-n summary of the products on one probe window."""

    n: int
    max_tilde: float
    residual_mass: float
    max_omega_on_k: float | None


def decay_profile(
    operator: WeightedTranslation,
    window: CompactWindow,
    epsilon: float,
    n_max: int,
    k_window: CompactWindow | None = None,
) -> list[DecayRow]:
    """Return max_Δ ω̃_n, λ(Δ ∖ {ω̃_n < ε}) and max_K ω_n for n = 1..n_max."""
    _validate(window, epsilon, 1.0, n_max)
    indices = window.indices()
    logs = operator.products.tilde_table(indices, n_max)
    masses = operator.carrier.cell_masses(indices)
    residual = masses @ (logs >= math.log(epsilon)).astype(np.float64)
    top = logs.max(axis=0)
    k_top = None
    if k_window is not None and not k_window.is_empty:
        k_top = operator.products.forward_table(k_window.indices(), n_max).max(axis=0)
    return [
        DecayRow(
            n=n,
            max_tilde=_exp(float(top[n])),
            residual_mass=float(residual[n]),
            max_omega_on_k=None if k_top is None else _exp(float(k_top[n])),
        )
        for n in range(1, n_max + 1)
    ]


@dataclass(frozen=True)
class TorsionRow:
    """Per-n summary of the inverse products on one window of a finite cyclic carrier."""

    n: int
    max_inverse: float
    residual_mass: float


def torsion_profile(operator: WeightedTranslation, window: CompactWindow, epsilon: float, n_max: int) -> list[TorsionRow]:
    """Return max_F ω_n^{-1} and λ(F ∖ {ω_n^{-1} < ε}) for n = 1..n_max.

    Raises:
        ValueError: If the carrier is not finite.
        CarrierMismatchError: If F holds indices outside 0..order-1.

    """
    _validate(window, epsilon, 1.0, n_max)
    if not operator.carrier.is_finite:
        msg = f"torsion profile needs a finite cyclic carrier, got {operator.carrier}"
        raise ValueError(msg)
    _require_canonical(operator.carrier, window)
    indices = window.indices()
    logs = -operator.products.forward_table(indices, n_max)
    residual = operator.carrier.cell_masses(indices) @ (logs >= math.log(epsilon)).astype(np.float64)
    top = logs.max(axis=0)
    return [
        TorsionRow(n=n, max_inverse=_exp(float(top[n])), residual_mass=float(residual[n])) for n in range(1, n_max + 1)
    ]
