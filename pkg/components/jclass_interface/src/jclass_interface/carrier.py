"""Carrier contract - discretized locally compact groups, their elements and compact windows.

All set arithmetic happens in integer index space. Native coordinates (k*h, exp(k*h), k mod order)
are only produced on request for weight evaluation and reporting.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING

import numpy as np

from jclass_interface.exceptions import EmptyWindowError

if TYPE_CHECKING:
    from collections.abc import Iterable

    from jclass_interface.arrays import FloatArray, IndexArray


class CarrierKind(StrEnum):
    """The four concrete group models."""

    FINITE_CYCLIC = "finite_cyclic"
    INTEGER_LINE = "integer_line"
    REAL_LINE_GRID = "real_line_grid"
    POSITIVE_REALS_LOG_GRID = "positive_reals_log_grid"


@dataclass(frozen=True)
class GroupElement:
    """A group element addressed by its grid index; a^m has index m * index."""

    index: int

    def power(self, m: int) -> int:
        """Return the (unreduced) index of a^m."""
        return m * self.index


@dataclass(frozen=True)
class CompactWindow:
    """Finite union of closed index ranges [lo, hi], kept sorted, disjoint and merged."""

    intervals: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        """Normalise the interval list."""
        merged: list[tuple[int, int]] = []
        for lo, hi in sorted((int(lo), int(hi)) for lo, hi in self.intervals):
            if lo > hi:
                msg = f"Interval [{lo}, {hi}] has lo > hi"
                raise ValueError(msg)
            if merged and lo <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(merged))

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_range(cls, lo: int, hi: int) -> CompactWindow:
        """Return the single interval [lo, hi]."""
        return cls(((lo, hi),))

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> CompactWindow:
        """Return the window covering exactly the given indices."""
        return cls(tuple((int(k), int(k)) for k in indices))

    @classmethod
    def empty(cls) -> CompactWindow:
        """Return the empty window."""
        return cls(())

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        """Return True when the window holds no index."""
        return not self.intervals

    @property
    def cell_count(self) -> int:
        """Return the number of grid cells in the window."""
        return sum(hi - lo + 1 for lo, hi in self.intervals)

    @property
    def lo(self) -> int:
        """Return the smallest index."""
        self._require_nonempty()
        return self.intervals[0][0]

    @property
    def hi(self) -> int:
        """Return the largest index."""
        self._require_nonempty()
        return self.intervals[-1][1]

    @property
    def diameter(self) -> int:
        """Return hi - lo in index units."""
        return self.hi - self.lo

    def indices(self) -> IndexArray:
        """Return all indices in increasing order."""
        if self.is_empty:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in self.intervals])

    def contains(self, k: int) -> bool:
        """Return True when index k lies in the window."""
        return any(lo <= k <= hi for lo, hi in self.intervals)

    def hull(self) -> CompactWindow:
        """Return the smallest single interval containing the window."""
        if self.is_empty:
            return self
        return CompactWindow.from_range(self.lo, self.hi)

    # ------------------------------------------------------------------
    # Set algebra (exact, integer)
    # ------------------------------------------------------------------

    def shifted(self, offset: int) -> CompactWindow:
        """Return the window translated by offset index units (no wrap-around)."""
        return CompactWindow(tuple((lo + offset, hi + offset) for lo, hi in self.intervals))

    def union(self, other: CompactWindow) -> CompactWindow:
        """Return self ∪ other."""
        return CompactWindow(self.intervals + other.intervals)

    def intersection(self, other: CompactWindow) -> CompactWindow:
        """Return self ∩ other."""
        pieces: list[tuple[int, int]] = []
        i = j = 0
        while i < len(self.intervals) and j < len(other.intervals):
            lo = max(self.intervals[i][0], other.intervals[j][0])
            hi = min(self.intervals[i][1], other.intervals[j][1])
            if lo <= hi:
                pieces.append((lo, hi))
            if self.intervals[i][1] < other.intervals[j][1]:
                i += 1
            else:
                j += 1
        return CompactWindow(tuple(pieces))

    def intersects(self, other: CompactWindow) -> bool:
        """Return True when the windows share an index."""
        return not self.intersection(other).is_empty

    def difference(self, other: CompactWindow) -> CompactWindow:
        """Return self minus other."""
        if self.is_empty or other.is_empty:
            return self
        keep = np.setdiff1d(self.indices(), other.indices(), assume_unique=True)
        return CompactWindow.from_indices(keep.tolist())

    def is_subset(self, other: CompactWindow) -> bool:
        """Return True when every index of self lies in other."""
        return self.intersection(other).cell_count == self.cell_count

    def _require_nonempty(self) -> None:
        if self.is_empty:
            msg = "empty window"
            raise EmptyWindowError(msg)

    def __str__(self) -> str:
        """Render as a union of index ranges."""
        if self.is_empty:
            return "∅"
        return " ∪ ".join(f"[{lo}, {hi}]" for lo, hi in self.intervals)


class GroupCarrier(ABC):
    """Abstract discretized locally compact abelian group with right Haar cell masses."""

    @property
    @abstractmethod
    def kind(self) -> CarrierKind:
        """Return the carrier variant."""
        raise NotImplementedError

    @property
    @abstractmethod
    def group_order(self) -> int | None:
        """Return the number of elements, or None for infinite carriers."""
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        """Return True for finite (torsion) groups."""
        return self.group_order is not None

    # ---- Measure ----
    @abstractmethod
    def cell_masses(self, indices: IndexArray) -> FloatArray:
        """Return the Haar mass of each grid cell."""
        raise NotImplementedError

    def cell_mass(self, k: int) -> float:
        """Return the Haar mass of grid cell k."""
        return float(self.cell_masses(np.array([k], dtype=np.int64))[0])

    def measure(self, window: CompactWindow) -> float:
        """Return λ(window), the sum of its cell masses."""
        if window.is_empty:
            return 0.0
        return math.fsum(self.cell_masses(window.indices()).tolist())

    # ---- Group structure ----
    @abstractmethod
    def normalize(self, indices: IndexArray) -> IndexArray:
        """Reduce raw indices to canonical representatives (mod order on finite carriers)."""
        raise NotImplementedError

    @abstractmethod
    def translate(self, k: int, a: GroupElement, m: int) -> int:
        """Return the index of x * a^m where x has index k."""
        raise NotImplementedError

    @abstractmethod
    def translate_window(self, window: CompactWindow, a: GroupElement, m: int) -> CompactWindow:
        """Return the window K * a^m."""
        raise NotImplementedError

    @abstractmethod
    def torsion_order(self, a: GroupElement) -> int | None:
        """Return the order of a, or None when a has infinite order."""
        raise NotImplementedError

    @abstractmethod
    def passes_through_compacts(self, a: GroupElement) -> bool:
        """Return True when K ∩ K a^{±m} is eventually empty for every compact K."""
        raise NotImplementedError

    @abstractmethod
    def separation_bound(self, window: CompactWindow, a: GroupElement) -> int | None:
        """Return the smallest N with K ∩ K a^{±m} = ∅ for all m ≥ N, or None when no such N exists."""
        raise NotImplementedError

    # ---- Native coordinates ----
    @abstractmethod
    def native_coordinates(self, indices: IndexArray) -> FloatArray:
        """Return the native coordinate of each grid index."""
        raise NotImplementedError

    @abstractmethod
    def element_from_native(self, x: float) -> GroupElement:
        """Return the grid element at native coordinate x.

        Raises:
            GridAlignmentError: If x is not a grid point.

        """
        raise NotImplementedError

    @abstractmethod
    def window_from_native(self, lo: float, hi: float) -> CompactWindow:
        """Return every grid point whose native coordinate lies in [lo, hi]."""
        raise NotImplementedError

    def contains_window(self, window: CompactWindow) -> bool:
        """Return True when every index of the window is a canonical index of this carrier."""
        if window.is_empty:
            return True
        indices = window.indices()
        return bool(np.array_equal(self.normalize(indices), indices))
