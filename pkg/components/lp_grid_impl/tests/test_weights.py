"""Unit tests for the concrete weight families."""

import math

import numpy as np
import pytest

from jclass_interface.carrier import CompactWindow
from jclass_interface.exceptions import WeightDomainError
from jclass_interface.weight import WeightKind
from lp_grid_impl.carriers import FiniteCyclic, PositiveRealsLogGrid, RealLineGrid
from lp_grid_impl.weights import ConstantWeight, ExponentialWeight, Jump, LogTableWeight, PiecewiseLinearWeight, Segment

pytestmark = pytest.mark.unit

INF = math.inf


def _step_down_weight(alpha: float = 2.0, beta: float = 3.0, *, require_continuous: bool = False) -> PiecewiseLinearWeight:
    """β left of -1, the line 1 - x/2 on (-1, 1), α from 1 on."""
    return PiecewiseLinearWeight.from_rows(
        [
            (-INF, -1.0, False, True, 0.0, beta),
            (-1.0, 1.0, False, False, -0.5, 1.0),
            (1.0, INF, True, False, 0.0, alpha),
        ],
        require_continuous=require_continuous,
    )


def _sawtooth_weight() -> PiecewiseLinearWeight:
    """2 left of -1, then a tooth on (-1, 2] repeated with period 2."""
    return PiecewiseLinearWeight.from_rows(
        [
            (-INF, -1.0, False, True, 0.0, 2.0),
            (-1.0, 0.0, False, False, -1.75, 0.25),
            (0.0, 1.0, True, True, 1.75, 0.25),
            (1.0, 2.0, False, True, -1.75, 3.75),
        ],
        period_start=2.0,
        period=2.0,
        require_continuous=True,
    )


class TestConstantWeight:
    """ω ≡ c."""

    def test_log_values(self) -> None:
        weight = ConstantWeight(2.0)
        logs = weight.log_values(RealLineGrid(0.1), np.arange(-3, 3))
        assert np.allclose(logs, math.log(2.0))
        assert weight.kind is WeightKind.CONSTANT
        assert weight.describe() == "constant 2"

    @pytest.mark.parametrize("value", [0.0, -1.0, math.inf])
    def test_rejects_non_positive(self, value: float) -> None:
        with pytest.raises(WeightDomainError):
            ConstantWeight(value)


class TestPiecewiseLinearWeight:
    """Case tables with explicit endpoint conventions."""

    def test_endpoint_conventions(self) -> None:
        weight = _step_down_weight()
        x = np.array([-1.0, -0.99, 0.0, 0.99, 1.0, 7.0, -7.0])
        assert weight.evaluate(x) == pytest.approx([3.0, 1.495, 1.0, 0.505, 2.0, 2.0, 3.0])

    def test_grid_evaluation(self) -> None:
        carrier = RealLineGrid(0.01)
        values = _step_down_weight().values(carrier, np.array([-100, 0, 99, 100]))
        assert values == pytest.approx([3.0, 1.0, 0.505, 2.0])

    def test_jumps_are_reported(self) -> None:
        weight = _step_down_weight()
        assert weight.jumps() == [Jump(-1.0, 3.0, 1.5), Jump(1.0, 0.5, 2.0)]
        assert "jumps at x = -1 (3 -> 1.5), 1 (0.5 -> 2)" in weight.describe()

    def test_continuity_is_enforced_on_request(self) -> None:
        with pytest.raises(WeightDomainError, match="jumps at x = -1, 1"):
            _step_down_weight(require_continuous=True)

    def test_periodic_extension(self) -> None:
        weight = _sawtooth_weight()
        assert weight.jumps() == []
        x = np.array([0.0, 0.25, 1.0, 2.0, 3.0, 4.0, 4.05, 6.25, 101.0])
        expected = [0.25, 0.6875, 2.0, 0.25, 2.0, 0.25, 0.3375, 0.6875, 2.0]
        assert weight.evaluate(x) == pytest.approx(expected)

    def test_periodic_extension_on_a_grid(self) -> None:
        carrier = RealLineGrid(0.05)
        window = CompactWindow.from_range(0, 5)
        values = _sawtooth_weight().values(carrier, window.indices())
        assert values.min() == pytest.approx(0.25)
        assert values.max() == pytest.approx(11 / 16)
        shifted = _sawtooth_weight().values(carrier, window.indices() + 40 * 7)
        assert shifted == pytest.approx(values)

    def test_uncovered_point(self) -> None:
        weight = PiecewiseLinearWeight.from_rows([(0.0, 1.0, True, True, 0.0, 1.0)])
        with pytest.raises(WeightDomainError, match="undefined at x = 2"):
            weight.evaluate(np.array([0.5, 2.0]))

    def test_non_positive_value(self) -> None:
        weight = PiecewiseLinearWeight.from_rows([(0.0, 1.0, True, True, -1.0, 0.5)])
        with pytest.raises(WeightDomainError, match="not strictly positive"):
            weight.evaluate(np.array([0.25, 0.75]))

    def test_overlapping_rows(self) -> None:
        with pytest.raises(WeightDomainError, match="overlap"):
            PiecewiseLinearWeight.from_rows([(0.0, 1.0, True, True, 0.0, 1.0), (1.0, 2.0, True, True, 0.0, 1.0)])

    def test_period_needs_a_start(self) -> None:
        with pytest.raises(WeightDomainError, match="together"):
            PiecewiseLinearWeight((Segment(0.0, 1.0, True, True, 0.0, 1.0),), period=1.0)

    def test_bad_segment(self) -> None:
        with pytest.raises(ValueError, match="not ordered"):
            Segment(1.0, 0.0, True, True, 0.0, 1.0)
        with pytest.raises(ValueError, match="closed on both sides"):
            Segment(1.0, 1.0, True, False, 0.0, 1.0)


class TestExponentialWeight:
    """ω(x) = exp(c x) at native coordinates."""

    def test_log_values_on_the_log_grid(self) -> None:
        carrier = PositiveRealsLogGrid.from_cells_per_doubling(70)
        logs = ExponentialWeight(1.0).log_values(carrier, np.array([0, 70, 140, -70]))
        assert logs == pytest.approx([1.0, 2.0, 4.0, 0.5])

    def test_rejects_non_finite_rate(self) -> None:
        with pytest.raises(WeightDomainError):
            ExponentialWeight(math.nan)


class TestLogTableWeight:
    """Per-residue log-values."""

    def test_wraps_indices(self) -> None:
        weight = LogTableWeight((0.7, -0.1, -0.2))
        logs = weight.log_values(FiniteCyclic(3), np.arange(6))
        assert logs.tolist() == [0.7, -0.1, -0.2, 0.7, -0.1, -0.2]
        assert weight.describe() == "log table (0.7, -0.1, -0.2)"

    def test_length_must_match_the_order(self) -> None:
        with pytest.raises(WeightDomainError, match="cannot weight"):
            LogTableWeight((0.0, 0.0, 0.0)).log_values(FiniteCyclic(4), np.arange(4))

    def test_rejects_non_finite_entries(self) -> None:
        with pytest.raises(WeightDomainError):
            LogTableWeight((0.0, math.inf))
