"""The weighted translation operator T_{a,ω} and its log-domain weight products.

    (T f)(k)    = ω(k) f(k - a)
    (T^m f)(k)  = exp(-log ω̃_m(k)) f(k - m a)
    (S h)(k)    = h(k + a) / ω(k + a)
    (S^m h)(k)  = h(k + m a) / ω_m(k)

with log ω̃_m(k) = -Σ_{i=0}^{m-1} log ω(k - i a) and log ω_m(k) = Σ_{i=1}^{m} log ω(k + i a).
Products are only ever formed as sums of logs; values are exponentiated together with log|f| at the
very end, so intermediate factors such as e^{x(2^m - 1)} never materialise on their own.
"""

# to avoid having to consider forward declarations, the below line must be first line in the file
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from jclass_interface.exceptions import CarrierMismatchError, JClassLabError
from lp_grid_impl.lp_function import LpFunction

if TYPE_CHECKING:
    from jclass_interface.arrays import FloatArray, IndexArray
    from jclass_interface.carrier import GroupCarrier, GroupElement
    from jclass_interface.weight import Weight

logger = logging.getLogger(__name__)

# Largest x with exp(x) still a finite double
LOG_FLOAT_MAX = math.log(np.finfo(np.float64).max)


class ProductRangeError(JClassLabError):
    """Raised when exponentiating a log-domain product leaves the floating-point range."""

    def __init__(self, message: str, index: int) -> None:
        """Store the offending grid index alongside the message."""
        super().__init__(message)
        self.index = index


def scale_in_log_domain(values: FloatArray, log_factors: FloatArray, indices: IndexArray) -> FloatArray:
    """Return values * exp(log_factors), combining log|values| and the factors before exponentiating.

    Zero values stay zero whatever their factor.

    Raises:
        ProductRangeError: If a nonzero result would overflow.

    """
    out = np.zeros(len(values), dtype=np.float64)
    nz = values != 0
    if not np.any(nz):
        return out
    logs = np.log(np.abs(values[nz])) + log_factors[nz]
    over = logs > LOG_FLOAT_MAX
    if np.any(over):
        where = int(indices[nz][np.argmax(over)])
        msg = f"weight product overflows at index {where} (log magnitude {float(np.max(logs)):.6g})"
        raise ProductRangeError(msg, where)
    out[nz] = np.sign(values[nz]) * np.exp(logs)
    return out


# ---------------------------------------------------------------------------
# Weight products
# ---------------------------------------------------------------------------


class WeightProducts:
    """On-demand evaluation of log ω̃_m and log ω_m for one operator."""

    def __init__(self, operator: WeightedTranslation) -> None:
        """Bind to an operator."""
        self.operator = operator

    def _log_weight(self, raw: IndexArray) -> FloatArray:
        # Orbit grids repeat indices heavily; evaluate the weight once per distinct cell.
        carrier = self.operator.carrier
        flat = carrier.normalize(raw.reshape(-1))
        unique, inverse = np.unique(flat, return_inverse=True)
        logs = self.operator.weight.log_values(carrier, unique)
        return logs[inverse.reshape(-1)].reshape(raw.shape)

    def _backward_steps(self, indices: IndexArray, count: int) -> FloatArray:
        stride = self.operator.a.index
        # column j holds log ω(k - j a), j = 0..count-1
        raw = np.asarray(indices, dtype=np.int64)[:, None] - stride * np.arange(count, dtype=np.int64)[None, :]
        return self._log_weight(raw)

    def _forward_steps(self, indices: IndexArray, count: int) -> FloatArray:
        stride = self.operator.a.index
        # column j holds log ω(k + (j + 1) a)
        raw = np.asarray(indices, dtype=np.int64)[:, None] + stride * np.arange(1, count + 1, dtype=np.int64)[None, :]
        return self._log_weight(raw)

    def tilde(self, indices: IndexArray, m: int) -> FloatArray:
        """Return log ω̃_m at each index."""
        _require_nonnegative(m)
        return -np.sum(self._backward_steps(indices, m), axis=1)

    def forward(self, indices: IndexArray, m: int) -> FloatArray:
        """Return log ω_m at each index."""
        _require_nonnegative(m)
        return np.sum(self._forward_steps(indices, m), axis=1)

    def tilde_table(self, indices: IndexArray, n_max: int) -> FloatArray:
        """Return a (len(indices), n_max + 1) array whose column n holds log ω̃_n."""
        _require_nonnegative(n_max)
        table = np.zeros((len(indices), n_max + 1), dtype=np.float64)
        # running sums along the orbit give every power at once; column 0 stays log 1 = 0
        table[:, 1:] = -np.cumsum(self._backward_steps(indices, n_max), axis=1)
        return table

    def forward_table(self, indices: IndexArray, n_max: int) -> FloatArray:
        """Return a (len(indices), n_max + 1) array whose column n holds log ω_n."""
        _require_nonnegative(n_max)
        table = np.zeros((len(indices), n_max + 1), dtype=np.float64)
        table[:, 1:] = np.cumsum(self._forward_steps(indices, n_max), axis=1)
        return table


def _require_nonnegative(m: int) -> None:
    if m < 0:
        msg = f"power must be a nonnegative integer, got {m}"
        raise ValueError(msg)


# ---------------------------------------------------------------------------
# Operator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightedTranslation:
    """T_{a,ω} acting on finitely supported functions in L^p of a carrier."""

    carrier: GroupCarrier
    a: GroupElement
    weight: Weight
    p: float = 2.0

    def __post_init__(self) -> None:
        """Validate the exponent and the element."""
        if not (math.isfinite(self.p) and self.p >= 1):
            msg = f"p must lie in [1, inf), got {self.p}"
            raise ValueError(msg)
        order = self.carrier.group_order
        if order is not None and not 0 <= self.a.index < order:
            msg = f"element index {self.a.index} is not a residue mod {order}"
            raise ValueError(msg)

    @cached_property
    def products(self) -> WeightProducts:
        """Return the log-domain product evaluator."""
        return WeightProducts(self)

    @property
    def torsion_order(self) -> int | None:
        """Return the order of a in the carrier."""
        return self.carrier.torsion_order(self.a)

    def _check(self, f: LpFunction) -> None:
        if f.carrier != self.carrier or f.p != self.p:
            msg = f"operator on {self.carrier} (p={self.p}) cannot act on a function on {f.carrier} (p={f.p})"
            raise CarrierMismatchError(msg)

    def _all_indices(self) -> IndexArray:
        return np.arange(self.carrier.group_order or 0, dtype=np.int64)

    # ------------------------------------------------------------------
    # T and its powers
    # ------------------------------------------------------------------

    def apply(self, f: LpFunction) -> LpFunction:
        """Return T f: index k holds ω(k) f(k - a)."""
        self._check(f)
        if self.carrier.is_finite:
            idx = self._all_indices()
            src = f.values_at(idx - self.a.index)
            values = scale_in_log_domain(src, self.weight.log_values(self.carrier, idx), idx)
            return LpFunction(self.carrier, self.p, 0, values)
        out_idx = f.indices() + self.a.index
        values = scale_in_log_domain(f.values, self.weight.log_values(self.carrier, out_idx), out_idx)
        return LpFunction(self.carrier, self.p, f.offset + self.a.index, values)

    def iterate(self, f: LpFunction, m: int) -> LpFunction:
        """Return T^m f from the closed-form product, not by m repeated applications.

        Raises:
            ProductRangeError: If a value of T^m f overflows.

        """
        _require_nonnegative(m)
        self._check(f)
        if m == 0:
            return f
        shift = self.a.power(m)
        if self.carrier.is_finite:
            idx = self._all_indices()
            src = f.values_at(idx - shift)
            factors = np.zeros(len(idx), dtype=np.float64)
            # zero cells keep a zero factor so an overflowing product never meets a zero value
            nz = src != 0
            factors[nz] = -self.products.tilde(idx[nz], m)
            return LpFunction(self.carrier, self.p, 0, scale_in_log_domain(src, factors, idx))
        out_idx = f.indices() + shift
        factors = np.zeros(len(out_idx), dtype=np.float64)
        nz = f.values != 0
        factors[nz] = -self.products.tilde(out_idx[nz], m)
        return LpFunction(self.carrier, self.p, f.offset + shift, scale_in_log_domain(f.values, factors, out_idx))

    def apply_repeatedly(self, f: LpFunction, m: int) -> LpFunction:
        """Return T^m f by m successive applications (independent of the product formula)."""
        _require_nonnegative(m)
        out = f
        for _ in range(m):
            out = self.apply(out)
        return out

    # ------------------------------------------------------------------
    # S = T^{-1} and its powers
    # ------------------------------------------------------------------

    def inverse_step(self, h: LpFunction) -> LpFunction:
        """Return S h: index k holds h(k + a) / ω(k + a)."""
        self._check(h)
        if self.carrier.is_finite:
            idx = self._all_indices()
            src_idx = idx + self.a.index
            values = scale_in_log_domain(h.values_at(src_idx), -self.weight.log_values(self.carrier, src_idx), idx)
            return LpFunction(self.carrier, self.p, 0, values)
        values = scale_in_log_domain(h.values, -self.weight.log_values(self.carrier, h.indices()), h.indices())
        return LpFunction(self.carrier, self.p, h.offset - self.a.index, values)

    def inverse_iterate(self, h: LpFunction, m: int) -> LpFunction:
        """Return S^m h: index k holds h(k + m a) / ω_m(k)."""
        _require_nonnegative(m)
        self._check(h)
        if m == 0:
            return h
        shift = self.a.power(m)
        if self.carrier.is_finite:
            idx = self._all_indices()
            src = h.values_at(idx + shift)
            factors = np.zeros(len(idx), dtype=np.float64)
            nz = src != 0
            factors[nz] = -self.products.forward(idx[nz], m)
            return LpFunction(self.carrier, self.p, 0, scale_in_log_domain(src, factors, idx))
        out_idx = h.indices() - shift
        factors = np.zeros(len(out_idx), dtype=np.float64)
        nz = h.values != 0
        factors[nz] = -self.products.forward(out_idx[nz], m)
        return LpFunction(self.carrier, self.p, h.offset - shift, scale_in_log_domain(h.values, factors, out_idx))

    # ------------------------------------------------------------------
    # Scalar products and orbits
    # ------------------------------------------------------------------

    def log_omega_tilde(self, k: int, m: int) -> float:
        """Return log ω̃_m(k)."""
        return float(self.products.tilde(np.array([k], dtype=np.int64), m)[0])

    def log_omega(self, k: int, m: int) -> float:
        """Return log ω_m(k)."""
        return float(self.products.forward(np.array([k], dtype=np.int64), m)[0])

    def orbit_norms(self, f: LpFunction, n: int) -> list[tuple[int, float]]:
        """Return (m, ‖T^m f‖_p) for m = 0..n; overflowing powers are reported as +inf."""
        if n < 1:
            msg = f"orbit length must be positive, got {n}"
            raise ValueError(msg)
        norms: list[tuple[int, float]] = []
        for m in range(n + 1):
            try:
                norms.append((m, self.iterate(f, m).p_norm()))
            except ProductRangeError as e:
                logger.warning("Orbit norm at m=%d left the floating-point range: %s", m, e)
                norms.append((m, math.inf))
        return norms

    def __str__(self) -> str:
        """Render as T_{a,ω} with its data."""
        return f"T(a={self.a.index}, ω={self.weight.describe()}, p={self.p:g}) on {self.carrier}"
