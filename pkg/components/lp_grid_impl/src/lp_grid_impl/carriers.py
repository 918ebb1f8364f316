"""Concrete carriers.

Four discretized group models with their right Haar cell masses:

1. FiniteCyclic(order)          Z_order, counting measure
2. IntegerLine()                 Z, counting measure
3. RealLineGrid(step)            hZ ⊂ (R, +), Lebesgue measure, cell mass h
4. PositiveRealsLogGrid(step)    exp(hZ) ⊂ (R+, ×), measure dx/x, cell mass h

(R+, ×) is handled through the log isomorphism onto (R, +): the group is abelian, so dx/x becomes
the uniform measure in log coordinates and the line machinery applies unchanged.
"""

# to avoid having to consider forward declarations, the below line must be first line in the file
from __future__ import annotations

import logging
import math
from abc import abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from jclass_interface.carrier import CarrierKind, CompactWindow, GroupCarrier, GroupElement
from jclass_interface.exceptions import EmptyWindowError, GridAlignmentError

if TYPE_CHECKING:
    from jclass_interface.arrays import FloatArray, IndexArray

logger = logging.getLogger(__name__)

# Tolerance, in index units, for snapping native coordinates onto the grid
SNAP_TOLERANCE = 1e-9

# Native line coordinates k*h are rounded so that case-table boundaries compare exactly
NATIVE_DECIMALS = 12


def _snap(units: float, field: str, x: float) -> int:
    k = round(units)
    if abs(units - k) > SNAP_TOLERANCE:
        msg = f"{field}: {x!r} is not aligned to the grid (index coordinate {units!r})"
        raise GridAlignmentError(msg)
    return int(k)


# ---------------------------------------------------------------------------
# Finite cyclic group
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteCyclic(GroupCarrier):
    """Z_order with counting measure. Every element is torsion."""

    order: int

    def __post_init__(self) -> None:
        """Validate the order."""
        if self.order < 1:
            msg = f"order must be a positive integer, got {self.order}"
            raise ValueError(msg)

    @property
    def kind(self) -> CarrierKind:
        """Return FINITE_CYCLIC."""
        return CarrierKind.FINITE_CYCLIC

    @property
    def group_order(self) -> int:
        """Return the order."""
        return self.order

    def cell_masses(self, indices: IndexArray) -> FloatArray:
        """Return ones (counting measure)."""
        return np.ones(len(indices), dtype=np.float64)

    def normalize(self, indices: IndexArray) -> IndexArray:
        """Reduce indices mod order."""
        return np.mod(indices, self.order).astype(np.int64)

    def translate(self, k: int, a: GroupElement, m: int) -> int:
        """Return (k + m * a.index) mod order."""
        return (k + a.power(m)) % self.order

    def translate_window(self, window: CompactWindow, a: GroupElement, m: int) -> CompactWindow:
        """Return K * a^m, re-sorted after wrap-around."""
        moved = self.normalize(window.indices() + a.power(m))
        return CompactWindow.from_indices(np.sort(moved).tolist())

    def torsion_order(self, a: GroupElement) -> int:
        """Return order / gcd(order, a.index)."""
        return self.order // math.gcd(self.order, a.index % self.order)

    def passes_through_compacts(self, a: GroupElement) -> bool:  # noqa: ARG002
        """Return False: torsion elements never pass through compacts."""
        return False

    def separation_bound(self, window: CompactWindow, a: GroupElement) -> None:  # noqa: ARG002
        """Return None: a translate of K by a power of a always meets K again."""
        return None

    def native_coordinates(self, indices: IndexArray) -> FloatArray:
        """Return the residues as floats."""
        return self.normalize(indices).astype(np.float64)

    def element_from_native(self, x: float) -> GroupElement:
        """Return the residue class of the integer x."""
        return GroupElement(_snap(float(x), "a", x) % self.order)

    def window_from_native(self, lo: float, hi: float) -> CompactWindow:
        """Return the residues r in 0..order-1 with lo <= r <= hi."""
        klo = max(0, math.ceil(lo - SNAP_TOLERANCE))
        khi = min(self.order - 1, math.floor(hi + SNAP_TOLERANCE))
        if klo > khi:
            return CompactWindow.empty()
        return CompactWindow.from_range(klo, khi)

    def full_window(self) -> CompactWindow:
        """Return the whole group."""
        return CompactWindow.from_range(0, self.order - 1)

    def __str__(self) -> str:
        """Render as Z_order."""
        return f"FiniteCyclic(order={self.order})"


# ---------------------------------------------------------------------------
# Line carriers
# ---------------------------------------------------------------------------


class _LineCarrier(GroupCarrier):
    """Shared machinery for the three carriers isomorphic to a lattice in (R, +)."""

    @property
    @abstractmethod
    def step(self) -> float:
        """Return the cell mass (grid step in additive coordinates)."""
        raise NotImplementedError

    @abstractmethod
    def _index_units(self, x: float, field: str) -> float:
        """Map a native coordinate to (fractional) index units."""
        raise NotImplementedError

    @property
    def group_order(self) -> None:
        """Return None (infinite group)."""
        return None

    def cell_masses(self, indices: IndexArray) -> FloatArray:
        """Return the constant cell mass for every index."""
        return np.full(len(indices), self.step, dtype=np.float64)

    def normalize(self, indices: IndexArray) -> IndexArray:
        """Return the indices unchanged."""
        return np.asarray(indices, dtype=np.int64)

    def translate(self, k: int, a: GroupElement, m: int) -> int:
        """Return k + m * a.index."""
        return k + a.power(m)

    def translate_window(self, window: CompactWindow, a: GroupElement, m: int) -> CompactWindow:
        """Return K shifted by m * a.index."""
        return window.shifted(a.power(m))

    def torsion_order(self, a: GroupElement) -> int | None:
        """Return 1 for the identity, None otherwise (the line is torsion-free)."""
        return 1 if a.index == 0 else None

    def passes_through_compacts(self, a: GroupElement) -> bool:
        """Return True iff a is not the identity."""
        return a.index != 0

    def separation_bound(self, window: CompactWindow, a: GroupElement) -> int | None:
        """Return the exact smallest N with K ∩ (K + m*a) = ∅ for every |m| >= N.

        The candidate floor(diam/|a|) + 1 is exact for intervals; gaps in a multi-interval window
        are handled by scanning m downwards until the translate meets K again.

        Raises:
            EmptyWindowError: If the window is empty.

        """
        if window.is_empty:
            msg = "empty window"
            raise EmptyWindowError(msg)
        if a.index == 0:
            logger.warning("Identity element is not compact-passing on %s", self)
            return None
        stride = abs(a.index)
        m = window.diameter // stride
        while m >= 1:
            if window.intersects(window.shifted(m * stride)):
                return m + 1
            m -= 1
        return 1

    def element_from_native(self, x: float) -> GroupElement:
        """Return the grid element at x, rejecting non-aligned coordinates."""
        return GroupElement(_snap(self._index_units(x, "a"), "a", x))

    def window_from_native(self, lo: float, hi: float) -> CompactWindow:
        """Return every grid point with native coordinate in [lo, hi]."""
        ulo = self._index_units(lo, "window")
        uhi = self._index_units(hi, "window")
        if not (math.isfinite(ulo) and math.isfinite(uhi)):
            msg = f"window: [{lo}, {hi}] is not compact"
            raise GridAlignmentError(msg)
        klo = math.ceil(ulo - SNAP_TOLERANCE)
        khi = math.floor(uhi + SNAP_TOLERANCE)
        if klo > khi:
            return CompactWindow.empty()
        return CompactWindow.from_range(klo, khi)


@dataclass(frozen=True)
class IntegerLine(_LineCarrier):
    """Z with counting measure."""

    @property
    def kind(self) -> CarrierKind:
        """Return INTEGER_LINE."""
        return CarrierKind.INTEGER_LINE

    @property
    def step(self) -> float:
        """Return 1."""
        return 1.0

    def _index_units(self, x: float, field: str) -> float:  # noqa: ARG002
        return float(x)

    def native_coordinates(self, indices: IndexArray) -> FloatArray:
        """Return the indices as floats."""
        return np.asarray(indices, dtype=np.float64)

    def __str__(self) -> str:
        """Render as IntegerLine."""
        return "IntegerLine()"


@dataclass(frozen=True)
class RealLineGrid(_LineCarrier):
    """The lattice hZ inside (R, +) with Lebesgue cell mass h."""

    grid_step: float

    def __post_init__(self) -> None:
        """Validate the step."""
        if not (math.isfinite(self.grid_step) and self.grid_step > 0):
            msg = f"step must be a positive real, got {self.grid_step}"
            raise ValueError(msg)

    @property
    def kind(self) -> CarrierKind:
        """Return REAL_LINE_GRID."""
        return CarrierKind.REAL_LINE_GRID

    @property
    def step(self) -> float:
        """Return h."""
        return self.grid_step

    def _index_units(self, x: float, field: str) -> float:  # noqa: ARG002
        return float(x) / self.grid_step

    def native_coordinates(self, indices: IndexArray) -> FloatArray:
        """Return k*h, rounded so case-table boundaries compare exactly."""
        return np.round(np.asarray(indices, dtype=np.float64) * self.grid_step, NATIVE_DECIMALS)

    def __str__(self) -> str:
        """Render with the step."""
        return f"RealLineGrid(step={self.grid_step:g})"


@dataclass(frozen=True)
class PositiveRealsLogGrid(_LineCarrier):
    """The lattice exp(hZ) inside (R+, ×); the Haar measure dx/x gives every cell mass h."""

    log_step: float

    def __post_init__(self) -> None:
        """Validate the log step."""
        if not (math.isfinite(self.log_step) and self.log_step > 0):
            msg = f"log_step must be a positive real, got {self.log_step}"
            raise ValueError(msg)

    @classmethod
    def from_cells_per_doubling(cls, cells: int) -> PositiveRealsLogGrid:
        """Return the grid with h = ln 2 / cells, on which every power of 2 is a grid point."""
        if cells < 1:
            msg = f"cells_per_doubling must be a positive integer, got {cells}"
            raise ValueError(msg)
        return cls(math.log(2.0) / cells)

    @property
    def kind(self) -> CarrierKind:
        """Return POSITIVE_REALS_LOG_GRID."""
        return CarrierKind.POSITIVE_REALS_LOG_GRID

    @property
    def step(self) -> float:
        """Return h."""
        return self.log_step

    def _index_units(self, x: float, field: str) -> float:
        if x <= 0:
            msg = f"{field}: {x!r} is not a positive real"
            raise GridAlignmentError(msg)
        return math.log(x) / self.log_step

    def native_coordinates(self, indices: IndexArray) -> FloatArray:
        """Return exp(k*h)."""
        return np.exp(np.asarray(indices, dtype=np.float64) * self.log_step)

    def __str__(self) -> str:
        """Render with the log step."""
        return f"PositiveRealsLogGrid(log_step={self.log_step:g})"


# ---------------------------------------------------------------------------
# Factory
# ---------------------------------------------------------------------------


def get_carrier(kind: CarrierKind, *, order: int | None = None, step: float | None = None) -> GroupCarrier:
    """Create a carrier of the requested kind.

    Args:
        kind: Carrier variant.
        order: Group order, required for FINITE_CYCLIC.
        step: Grid step h, required for REAL_LINE_GRID and POSITIVE_REALS_LOG_GRID.

    Returns:
        A concrete GroupCarrier instance.

    Raises:
        ValueError: If a required parameter is missing or invalid.

    """
    if kind is CarrierKind.FINITE_CYCLIC:
        if order is None:
            msg = "order is required for finite_cyclic"
            raise ValueError(msg)
        return FiniteCyclic(order)
    if kind is CarrierKind.INTEGER_LINE:
        return IntegerLine()
    if step is None:
        msg = f"step is required for {kind}"
        raise ValueError(msg)
    if kind is CarrierKind.REAL_LINE_GRID:
        return RealLineGrid(step)
    return PositiveRealsLogGrid(step)
