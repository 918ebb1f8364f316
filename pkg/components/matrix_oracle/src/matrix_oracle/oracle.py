"""Dense γ×γ realisation of a weighted translation on a finite cyclic carrier.

The oracle never touches the weight-product machinery used by the checkers. Inverse powers are computed
twice from the matrix entries alone:

    dense         scipy.linalg.inv, then repeated matrix products, norm taken column-wise
    index chase   M e_j = ω(j + a) e_{j+a}, so M^n e_j = ω_n(j) e_{j+na} and ‖M^{-n}‖ = max_j 1/ω_n(j)

A weighted cyclic permutation has one nonzero per row and column, so its ℓ^p operator norm is the largest
absolute entry for every p; the dense path reads it off as the maximum absolute column sum.
"""

# to avoid having to consider forward declarations, the below line must be first line in the file
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg as spla

from jclass_interface.exceptions import JClassLabError
from lp_grid_impl.translation import WeightedTranslation
from lp_grid_impl.weights import LogTableWeight

if TYPE_CHECKING:
    from jclass_interface.arrays import FloatArray, IndexArray

logger = logging.getLogger(__name__)

# Relative agreement required between the dense and index-chasing paths
AGREEMENT_RTOL = 1e-8

# The dense path stops once |log ‖M^-n‖| passes this bound
DENSE_LOG_LIMIT = 650.0


class OracleConsistencyError(JClassLabError):
    """Raised when the dense and index-chasing inverse norms disagree."""


@dataclass(frozen=True, eq=False)
class CyclicMatrix:
    """A weighted cyclic permutation matrix: one positive entry per row and per column."""

    entries: FloatArray

    def __post_init__(self) -> None:
        """Check the shape and the weighted-permutation pattern."""
        m = np.array(self.entries, dtype=np.float64, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:  # noqa: PLR2004
            msg = f"expected a nonempty square matrix, got shape {m.shape}"
            raise ValueError(msg)
        nonzero = m != 0
        if not (np.all(nonzero.sum(axis=0) == 1) and np.all(nonzero.sum(axis=1) == 1)):
            msg = "matrix must have exactly one nonzero entry per row and per column"
            raise ValueError(msg)
        if np.any(m[nonzero] <= 0) or not np.all(np.isfinite(m)):
            msg = "nonzero entries must be finite and positive"
            raise ValueError(msg)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def order(self) -> int:
        """Return γ."""
        return int(self.entries.shape[0])

    def column_images(self) -> tuple[IndexArray, FloatArray]:
        """Return, per column j, the row holding its entry and the entry's log."""
        rows = np.argmax(self.entries != 0, axis=0)
        return rows, np.log(self.entries[rows, np.arange(self.order)])

    def apply(self, vector: FloatArray) -> FloatArray:
        """Return M v."""
        return self.entries @ np.asarray(vector, dtype=np.float64)


def to_matrix(operator: WeightedTranslation) -> CyclicMatrix:
    """Return M with M[k, (k - a) mod γ] = ω(k), so that M vec(f) = vec(T f).

    Raises:
        ValueError: If the operator does not act on a finite cyclic carrier.

    """
    order = operator.carrier.group_order
    if order is None:
        msg = f"matrix realisation needs a finite cyclic carrier, got {operator.carrier}"
        raise ValueError(msg)
    k = np.arange(order, dtype=np.int64)
    entries = np.zeros((order, order), dtype=np.float64)
    entries[k, (k - operator.a.index) % order] = operator.weight.values(operator.carrier, k)
    return CyclicMatrix(entries)


# ---------------------------------------------------------------------------
# Inverse powers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InverseNormReport:
    """‖M^{-n}‖ for n = 1..N from the index-chasing path, with the dense cross-check status."""

    log_norms: tuple[float, ...]
    dense_checked_up_to: int
    dense_overflowed: bool

    @property
    def norms(self) -> list[tuple[int, float]]:
        """Return (n, ‖M^{-n}‖) pairs; values below the float range read as 0."""
        return [(n, math.exp(v) if v < DENSE_LOG_LIMIT else math.inf) for n, v in enumerate(self.log_norms, start=1)]

    def argmin(self) -> tuple[int, float]:
        """Return (n, ‖M^{-n}‖) at the smallest norm (the first one on ties)."""
        n = int(np.argmin(self.log_norms)) + 1
        return n, math.exp(self.log_norms[n - 1])


def _chased_log_norms(matrix: CyclicMatrix, count: int) -> FloatArray:
    """Return log ‖M^{-n}‖ for n = 1..count by following each column's orbit."""
    rows, logs = matrix.column_images()
    position = np.arange(matrix.order)
    log_product = np.zeros(matrix.order, dtype=np.float64)
    out = np.empty(count, dtype=np.float64)
    for n in range(count):
        # log_product[j] is the log of the one nonzero entry in column j of M^(n+1); the 1-norm of
        # the inverse power is the largest inverse product
        log_product += logs[position]
        position = rows[position]
        out[n] = float(np.max(-log_product))
    return out


def _dense_log_norms(matrix: CyclicMatrix, count: int) -> tuple[list[float], bool]:
    inverse = spla.inv(matrix.entries)
    power = np.eye(matrix.order)
    out: list[float] = []
    for _ in range(count):
        power = power @ inverse
        norm = float(np.linalg.norm(power, ord=1))
        # too close to the float limits to trust; index chasing covers the rest
        if not (math.isfinite(norm) and norm > 0) or abs(math.log(norm)) > DENSE_LOG_LIMIT:
            return out, True
        out.append(math.log(norm))
    return out, False


def inverse_power_report(matrix: CyclicMatrix, count: int) -> InverseNormReport:
    """Compute ‖M^{-n}‖ for n = 1..count along both paths and cross-check them.

    Raises:
        ValueError: If count < 1.
        OracleConsistencyError: If the paths disagree beyond 1e-8 relative wherever both are available.

    """
    if count < 1:
        msg = f"count must be a positive integer, got {count}"
        raise ValueError(msg)
    chased = _chased_log_norms(matrix, count)
    dense, overflowed = _dense_log_norms(matrix, count)
    if overflowed:
        logger.warning("Dense inverse powers left the floating-point range after n=%d; index chasing only beyond", len(dense))
    for n, (d, c) in enumerate(zip(dense, chased, strict=False), start=1):
        if not math.isclose(math.exp(d - c), 1.0, rel_tol=AGREEMENT_RTOL):
            msg = f"‖M^-{n}‖: dense path gives {math.exp(d):.12g}, index chasing gives {math.exp(c):.12g}"
            raise OracleConsistencyError(msg)
    return InverseNormReport(tuple(chased.tolist()), len(dense), overflowed)


def inverse_power_norms(matrix: CyclicMatrix, count: int) -> list[tuple[int, float]]:
    """Return (n, ‖M^{-n}‖) for n = 1..count, cross-checked between both paths."""
    return inverse_power_report(matrix, count).norms


def j_zero_full_space(matrix: CyclicMatrix, count: int, eta: float) -> bool:
    """Return True iff min_{n <= count} ‖M^{-n}‖ < η.

    Then x_n := M^{-n} y tends to 0 along those n while M^n x_n = y, for every y at once.
    """
    if not eta > 0:
        msg = f"η must be positive, got {eta}"
        raise ValueError(msg)
    report = inverse_power_report(matrix, count)
    return min(report.log_norms) < math.log(eta)


def vector_membership(matrix: CyclicMatrix, y: FloatArray, count: int, p: float = 2.0) -> float:
    """Return min_{n <= count} ‖M^{-n} y‖_p, solving with one LU factorisation."""
    factors = spla.lu_factor(matrix.entries)
    x = np.asarray(y, dtype=np.float64)
    best = math.inf
    for _ in range(count):
        x = spla.lu_solve(factors, x)
        if not np.all(np.isfinite(x)):
            break
        best = min(best, float(np.linalg.norm(x, ord=p)))
    return best


def reflect(operator: WeightedTranslation) -> WeightedTranslation:
    """Return the operator for a^{-1} with ω'(k) = ω(-k); its matrix is P M P with (P f)(k) = f(-k)."""
    order = operator.carrier.group_order
    if order is None:
        msg = f"reflection is only built for finite cyclic carriers, got {operator.carrier}"
        raise ValueError(msg)
    k = np.arange(order, dtype=np.int64)
    logs = operator.weight.log_values(operator.carrier, (-k) % order)
    a = operator.carrier.element_from_native(float((-operator.a.index) % order))
    return WeightedTranslation(operator.carrier, a, LogTableWeight(tuple(logs.tolist())), operator.p)
