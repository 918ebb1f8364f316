"""Concrete weights.

Weights are evaluated at the native coordinate of each grid point and returned as log-values, so that
products over long orbits can be accumulated by summation. Piecewise weights honour the declared
endpoint conventions exactly; there is no rounding towards either neighbouring segment.
"""

# to avoid having to consider forward declarations, the below line must be first line in the file
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import pairwise
from typing import TYPE_CHECKING

import numpy as np

from jclass_interface.exceptions import WeightDomainError
from jclass_interface.weight import Weight, WeightKind

if TYPE_CHECKING:
    from collections.abc import Iterable

    from numpy.typing import NDArray

    from jclass_interface.arrays import FloatArray, IndexArray
    from jclass_interface.carrier import GroupCarrier

logger = logging.getLogger(__name__)

# Reduced periodic coordinates are rounded so that boundaries such as x = 2 land exactly on 2.0
_REDUCE_DECIMALS = 12

# Two one-sided values closer than this are treated as continuous
JUMP_TOLERANCE = 1e-12


def _require_positive(values: FloatArray, x: FloatArray, label: str) -> None:
    bad = ~(values > 0)
    if np.any(bad):
        first = int(np.argmax(bad))
        msg = f"{label}: ω({x[first]:g}) = {values[first]:g} is not strictly positive"
        raise WeightDomainError(msg)


# ---------------------------------------------------------------------------
# Constant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantWeight(Weight):
    """ω ≡ value."""

    value: float

    def __post_init__(self) -> None:
        """Validate positivity."""
        if not (math.isfinite(self.value) and self.value > 0):
            msg = f"constant weight must be a positive real, got {self.value}"
            raise WeightDomainError(msg)

    @property
    def kind(self) -> WeightKind:
        """Return CONSTANT."""
        return WeightKind.CONSTANT

    def log_values(self, carrier: GroupCarrier, indices: IndexArray) -> FloatArray:  # noqa: ARG002
        """Return log(value) everywhere."""
        return np.full(len(indices), math.log(self.value), dtype=np.float64)

    def describe(self) -> str:
        """Return e.g. 'constant 2'."""
        return f"constant {self.value:g}"


# ---------------------------------------------------------------------------
# Piecewise linear
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    """One row of a case table: ω(x) = slope * x + intercept on an interval with explicit endpoints."""

    lo: float
    hi: float
    lo_inclusive: bool
    hi_inclusive: bool
    slope: float
    intercept: float

    def __post_init__(self) -> None:
        """Reject empty or inverted intervals."""
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            msg = f"segment bounds [{self.lo}, {self.hi}] are not ordered"
            raise ValueError(msg)
        if self.lo == self.hi and not (self.lo_inclusive and self.hi_inclusive):
            msg = f"degenerate segment at {self.lo} must be closed on both sides"
            raise ValueError(msg)

    def mask(self, x: FloatArray) -> NDArray[np.bool_]:
        """Return which coordinates fall in this segment."""
        above = x >= self.lo if self.lo_inclusive else x > self.lo
        below = x <= self.hi if self.hi_inclusive else x < self.hi
        return above & below

    def at(self, x: float) -> float:
        """Evaluate the affine map (ignoring the interval)."""
        return self.slope * x + self.intercept

    def __str__(self) -> str:
        """Render as e.g. '(-1, 1) -> -0.5x + 1'."""
        left = "[" if self.lo_inclusive else "("
        right = "]" if self.hi_inclusive else ")"
        return f"{left}{self.lo:g}, {self.hi:g}{right} -> {self.slope:g}x + {self.intercept:g}"


@dataclass(frozen=True)
class Jump:
    """A discontinuity of a piecewise weight at a segment boundary."""

    at: float
    left: float
    right: float


@dataclass(frozen=True)
class PiecewiseLinearWeight(Weight):
    """Case-table weight with optional periodic extension.

    For x > period_start the weight repeats with the given period:
    ω(x) = ω(x - period * ceil((x - period_start) / period)).
    """

    segments: tuple[Segment, ...]
    period_start: float | None = None
    period: float | None = None
    require_continuous: bool = False

    def __post_init__(self) -> None:
        """Validate ordering, the period pair and (optionally) continuity."""
        if not self.segments:
            msg = "a piecewise weight needs at least one segment"
            raise WeightDomainError(msg)
        object.__setattr__(self, "segments", tuple(self.segments))
        for prev, nxt in pairwise(self.segments):
            if prev.hi > nxt.lo or (prev.hi == nxt.lo and prev.hi_inclusive and nxt.lo_inclusive):
                msg = f"segments {prev} and {nxt} overlap"
                raise WeightDomainError(msg)
        if (self.period is None) != (self.period_start is None):
            msg = "period and period_start must be given together"
            raise WeightDomainError(msg)
        if self.period is not None and not (math.isfinite(self.period) and self.period > 0):
            msg = f"period must be a positive real, got {self.period}"
            raise WeightDomainError(msg)
        jumps = self.jumps()
        if jumps and self.require_continuous:
            where = ", ".join(f"{j.at:g}" for j in jumps)
            msg = f"weight is required to be continuous but jumps at x = {where}"
            raise WeightDomainError(msg)
        for jump in jumps:
            logger.debug("Weight jumps at x=%g (%g -> %g)", jump.at, jump.left, jump.right)

    @classmethod
    def from_rows(
        cls,
        rows: Iterable[tuple[float, float, bool, bool, float, float]],
        *,
        period_start: float | None = None,
        period: float | None = None,
        require_continuous: bool = False,
    ) -> PiecewiseLinearWeight:
        """Build from (lo, hi, lo_inclusive, hi_inclusive, slope, intercept) rows in table order."""
        return cls(tuple(Segment(*row) for row in rows), period_start, period, require_continuous)

    @property
    def kind(self) -> WeightKind:
        """Return PIECEWISE_LINEAR."""
        return WeightKind.PIECEWISE_LINEAR

    def reduce(self, x: FloatArray) -> FloatArray:
        """Map native coordinates into the base table domain using the periodic extension."""
        x = np.asarray(x, dtype=np.float64)
        if self.period is None or self.period_start is None:
            return x
        out = x.copy()
        over = x > self.period_start
        turns = np.ceil(np.round((x[over] - self.period_start) / self.period, 9))
        out[over] = np.round(x[over] - self.period * turns, _REDUCE_DECIMALS)
        return out

    def evaluate(self, x: FloatArray) -> FloatArray:
        """Return ω at native coordinates.

        Raises:
            WeightDomainError: If a coordinate is not covered by any segment or ω is not positive there.

        """
        xr = self.reduce(x)
        out = np.full(len(xr), np.nan, dtype=np.float64)
        for segment in self.segments:
            hit = segment.mask(xr)
            out[hit] = segment.slope * xr[hit] + segment.intercept
        missing = np.isnan(out)
        if np.any(missing):
            first = int(np.argmax(missing))
            msg = f"weight is undefined at x = {float(np.asarray(x)[first]):g} (no segment covers it)"
            raise WeightDomainError(msg)
        _require_positive(out, np.asarray(x, dtype=np.float64), "piecewise weight")
        return out

    def log_values(self, carrier: GroupCarrier, indices: IndexArray) -> FloatArray:
        """Return log ω at the native coordinates of the indices."""
        return np.log(self.evaluate(carrier.native_coordinates(indices)))

    def _segment_at(self, x: float) -> Segment | None:
        probe = np.array([x])
        for segment in self.segments:
            if segment.mask(probe)[0]:
                return segment
        return None

    def _segment_right_of(self, x: float) -> Segment | None:
        for segment in self.segments:
            if segment.lo <= x < segment.hi:
                return segment
        return None

    def jumps(self) -> list[Jump]:
        """List the boundaries where adjacent rows disagree, including the periodic wrap point."""
        found: list[Jump] = []
        for prev, nxt in pairwise(self.segments):
            if prev.hi != nxt.lo or not math.isfinite(prev.hi):
                continue
            left, right = prev.at(prev.hi), nxt.at(nxt.lo)
            if abs(left - right) > JUMP_TOLERANCE:
                found.append(Jump(prev.hi, left, right))
        if self.period is not None and self.period_start is not None:
            at_start = self._segment_at(self.period_start)
            wrap = self.period_start - self.period
            after_wrap = self._segment_right_of(wrap)
            if at_start is not None and after_wrap is not None:
                left, right = at_start.at(self.period_start), after_wrap.at(wrap)
                if abs(left - right) > JUMP_TOLERANCE:
                    found.append(Jump(self.period_start, left, right))
        return found

    def describe(self) -> str:
        """Return the case table on one line, with its discontinuities."""
        rows = "; ".join(str(s) for s in self.segments)
        text = f"piecewise {rows}"
        if self.period is not None:
            text += f"; periodic with period {self.period:g} for x > {self.period_start:g}"
        jumps = self.jumps()
        if jumps:
            text += "; jumps at x = " + ", ".join(f"{j.at:g} ({j.left:g} -> {j.right:g})" for j in jumps)
        return text


# ---------------------------------------------------------------------------
# Exponential
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentialWeight(Weight):
    """ω(x) = exp(rate * x) in native coordinates."""

    rate: float

    def __post_init__(self) -> None:
        """Validate the rate."""
        if not math.isfinite(self.rate):
            msg = f"exponential rate must be finite, got {self.rate}"
            raise WeightDomainError(msg)

    @property
    def kind(self) -> WeightKind:
        """Return EXPONENTIAL."""
        return WeightKind.EXPONENTIAL

    def log_values(self, carrier: GroupCarrier, indices: IndexArray) -> FloatArray:
        """Return rate * x."""
        logs = self.rate * carrier.native_coordinates(indices)
        if not np.all(np.isfinite(logs)):
            msg = "exponential weight leaves the floating-point range on the requested indices"
            raise WeightDomainError(msg)
        return logs

    def describe(self) -> str:
        """Return e.g. 'exp(1 x)'."""
        return f"exp({self.rate:g} x)"


# ---------------------------------------------------------------------------
# Log table (finite cyclic carriers)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogTableWeight(Weight):
    """Per-index log-values on Z_order; table[k] = log ω(k)."""

    table: tuple[float, ...]

    def __post_init__(self) -> None:
        """Freeze the table and check it is finite."""
        object.__setattr__(self, "table", tuple(float(v) for v in self.table))
        if not self.table or not all(math.isfinite(v) for v in self.table):
            msg = "log table must be a nonempty list of finite reals"
            raise WeightDomainError(msg)

    @property
    def kind(self) -> WeightKind:
        """Return LOG_TABLE."""
        return WeightKind.LOG_TABLE

    def log_values(self, carrier: GroupCarrier, indices: IndexArray) -> FloatArray:
        """Return table[k mod order].

        Raises:
            WeightDomainError: If the carrier is not finite cyclic of the table's length.

        """
        if carrier.group_order != len(self.table):
            msg = f"a log table of length {len(self.table)} cannot weight {carrier}"
            raise WeightDomainError(msg)
        return np.asarray(self.table, dtype=np.float64)[carrier.normalize(indices)]

    def describe(self) -> str:
        """Return the table."""
        return "log table (" + ", ".join(f"{v:g}" for v in self.table) + ")"
