"""Weight contract - strictly positive functions on a carrier, evaluated in log space."""

from __future__ import annotations

from abc import ABC, abstractmethod
from enum import StrEnum
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from jclass_interface.arrays import FloatArray, IndexArray
    from jclass_interface.carrier import GroupCarrier


class WeightKind(StrEnum):
    """Supported weight families."""

    CONSTANT = "constant"
    PIECEWISE_LINEAR = "piecewise_linear"
    EXPONENTIAL = "exponential"
    LOG_TABLE = "log_table"


class Weight(ABC):
    """Abstract weight ω: G → (0, ∞)."""

    @property
    @abstractmethod
    def kind(self) -> WeightKind:
        """Return the weight family."""
        raise NotImplementedError

    @abstractmethod
    def log_values(self, carrier: GroupCarrier, indices: IndexArray) -> FloatArray:
        """Return log ω at each grid index.

        Raises:
            WeightDomainError: If ω is undefined or not strictly positive at some index.

        """
        raise NotImplementedError

    @abstractmethod
    def describe(self) -> str:
        """Return a one-line human-readable description."""
        raise NotImplementedError

    def values(self, carrier: GroupCarrier, indices: IndexArray) -> FloatArray:
        """Return ω at each grid index."""
        return np.exp(self.log_values(carrier, indices))

    def log_value(self, carrier: GroupCarrier, k: int) -> float:
        """Return log ω at a single index."""
        return float(self.log_values(carrier, np.array([k], dtype=np.int64))[0])

    def __repr__(self) -> str:
        """Return the description."""
        return f"<Weight {self.describe()}>"
