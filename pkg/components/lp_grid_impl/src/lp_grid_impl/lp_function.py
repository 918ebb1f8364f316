"""Finitely supported functions on a carrier - the discretized L^p(G).

Storage is a dense slice: values[i] is the value at index offset + i, zero elsewhere. On a finite cyclic
carrier the slice always covers exactly 0..order-1. Every cell has positive mass, so essential suprema
are plain maxima over the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from jclass_interface.carrier import CompactWindow, GroupElement
from jclass_interface.exceptions import CarrierMismatchError, EmptyWindowError

if TYPE_CHECKING:
    from collections.abc import Mapping

    from jclass_interface.arrays import FloatArray, IndexArray
    from jclass_interface.carrier import GroupCarrier


@dataclass(frozen=True, eq=False)
class LpFunction:
    """Immutable finitely supported real function with an L^p exponent."""

    carrier: GroupCarrier
    p: float
    offset: int
    values: FloatArray

    def __post_init__(self) -> None:
        """Validate and freeze the value slice."""
        if not (math.isfinite(self.p) and self.p >= 1):
            msg = f"p must lie in [1, inf), got {self.p}"
            raise ValueError(msg)
        values = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if not np.all(np.isfinite(values)):
            msg = "function values must be finite"
            raise ValueError(msg)
        order = self.carrier.group_order
        if order is not None and (self.offset != 0 or len(values) != order):
            msg = f"a function on {self.carrier} must store exactly indices 0..{order - 1}"
            raise ValueError(msg)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "offset", int(self.offset))

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def zeros(cls, carrier: GroupCarrier, p: float) -> LpFunction:
        """Return the zero function."""
        if carrier.is_finite:
            size = _finite_order(carrier)
            return cls(carrier, p, 0, np.zeros(size))
        return cls(carrier, p, 0, np.zeros(0))

    @classmethod
    def indicator(cls, carrier: GroupCarrier, p: float, window: CompactWindow, amplitude: float = 1.0) -> LpFunction:
        """Return amplitude * χ_window."""
        return cls.from_mapping(carrier, p, dict.fromkeys(window.indices().tolist(), amplitude))

    @classmethod
    def from_mapping(cls, carrier: GroupCarrier, p: float, points: Mapping[int, float]) -> LpFunction:
        """Return the function with the given values at the given indices (later keys win on collisions)."""
        if carrier.is_finite:
            values = np.zeros(_finite_order(carrier))
            for k, v in points.items():
                values[int(carrier.normalize(np.array([k], dtype=np.int64))[0])] = v
            return cls(carrier, p, 0, values)
        if not points:
            return cls.zeros(carrier, p)
        lo, hi = min(points), max(points)
        values = np.zeros(hi - lo + 1)
        for k, v in points.items():
            values[k - lo] = v
        return cls(carrier, p, lo, values)

    @classmethod
    def from_slice(cls, carrier: GroupCarrier, p: float, offset: int, values: FloatArray) -> LpFunction:
        """Return the function stored as a dense slice starting at offset (wrapped on finite carriers)."""
        if not carrier.is_finite:
            return cls(carrier, p, offset, values)
        dense = np.zeros(_finite_order(carrier))
        idx = carrier.normalize(np.arange(offset, offset + len(values), dtype=np.int64))
        np.add.at(dense, idx, values)
        return cls(carrier, p, 0, dense)

    # ------------------------------------------------------------------
    # Pointwise access
    # ------------------------------------------------------------------

    def indices(self) -> IndexArray:
        """Return the stored index range."""
        return np.arange(self.offset, self.offset + len(self.values), dtype=np.int64)

    def values_at(self, indices: IndexArray) -> FloatArray:
        """Return f at arbitrary indices (zero outside the stored slice)."""
        idx = self.carrier.normalize(np.asarray(indices, dtype=np.int64)) - self.offset
        out = np.zeros(len(idx), dtype=np.float64)
        inside = (idx >= 0) & (idx < len(self.values))
        out[inside] = self.values[idx[inside]]
        return out

    def value_at(self, k: int) -> float:
        """Return f(k)."""
        return float(self.values_at(np.array([k], dtype=np.int64))[0])

    def support(self) -> CompactWindow:
        """Return σ(f) = {k : f(k) != 0} as an interval list."""
        return CompactWindow.from_indices(self.indices()[self.values != 0].tolist())

    # ------------------------------------------------------------------
    # Norms
    # ------------------------------------------------------------------

    def p_norm(self) -> float:
        """Return (Σ_k mass(k) |f(k)|^p)^{1/p}."""
        nz = self.values != 0
        if not np.any(nz):
            return 0.0
        scale = float(np.max(np.abs(self.values[nz])))
        masses = self.carrier.cell_masses(self.indices()[nz])
        ratio = np.abs(self.values[nz]) / scale
        return scale * math.fsum((masses * ratio**self.p).tolist()) ** (1.0 / self.p)

    def ess_sup(self) -> float:
        """Return max_k |f(k)| over the whole carrier."""
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0

    def ess_sup_on(self, window: CompactWindow) -> float:
        """Return max_{k in window} |f(k)|.

        Raises:
            EmptyWindowError: If the window is empty.

        """
        if window.is_empty:
            msg = "empty window"
            raise EmptyWindowError(msg)
        return float(np.max(np.abs(self.values_at(window.indices()))))

    def integrate(self, window: CompactWindow) -> float:
        """Return Σ_{k in window} f(k) mass(k), exactly rounded."""
        if window.is_empty:
            return 0.0
        idx = window.indices()
        return math.fsum((self.values_at(idx) * self.carrier.cell_masses(idx)).tolist())

    # ------------------------------------------------------------------
    # Algebra
    # ------------------------------------------------------------------

    def _check_compatible(self, other: LpFunction) -> None:
        if self.carrier != other.carrier or self.p != other.p:
            msg = f"operands live on {self.carrier} (p={self.p}) and {other.carrier} (p={other.p})"
            raise CarrierMismatchError(msg)

    def add(self, other: LpFunction) -> LpFunction:
        """Return f + g."""
        self._check_compatible(other)
        if self.carrier.is_finite:
            return LpFunction(self.carrier, self.p, 0, self.values + other.values)
        if not len(other.values):
            return self
        if not len(self.values):
            return other
        lo = min(self.offset, other.offset)
        hi = max(self.offset + len(self.values), other.offset + len(other.values))
        span = np.arange(lo, hi, dtype=np.int64)
        return LpFunction(self.carrier, self.p, lo, self.values_at(span) + other.values_at(span))

    def subtract(self, other: LpFunction) -> LpFunction:
        """Return f - g."""
        return self.add(other.scale(-1.0))

    def scale(self, c: float) -> LpFunction:
        """Return c * f."""
        return LpFunction(self.carrier, self.p, self.offset, c * self.values)

    def restrict(self, window: CompactWindow) -> LpFunction:
        """Return f χ_window."""
        keep = np.isin(self.indices(), self.carrier.normalize(window.indices()))
        return LpFunction(self.carrier, self.p, self.offset, np.where(keep, self.values, 0.0))

    def convolve_dirac(self, a: GroupElement, m: int = 1) -> LpFunction:
        """Return f * δ_{a^m}, i.e. x ↦ f(x a^{-m})."""
        return LpFunction.from_slice(self.carrier, self.p, self.offset + a.power(m), self.values)

    def distance(self, other: LpFunction) -> float:
        """Return ‖f - g‖_p."""
        return self.subtract(other).p_norm()

    def __repr__(self) -> str:
        """Summarise carrier, exponent and support."""
        return f"<LpFunction on {self.carrier} p={self.p:g} support={self.support()}>"


def _finite_order(carrier: GroupCarrier) -> int:
    order = carrier.group_order
    if order is None:
        msg = f"{carrier} is not a finite carrier"
        raise ValueError(msg)
    return order
