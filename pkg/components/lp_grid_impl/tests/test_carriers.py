"""Unit tests for the concrete carriers."""

import math

import pytest
from hypothesis import given, seed
from hypothesis import strategies as st

from jclass_interface.carrier import CarrierKind, CompactWindow, GroupElement
from jclass_interface.exceptions import EmptyWindowError, GridAlignmentError
from lp_grid_impl.carriers import FiniteCyclic, IntegerLine, PositiveRealsLogGrid, RealLineGrid, get_carrier

pytestmark = pytest.mark.unit


class TestCellMass:
    """Haar cell masses per variant."""

    def test_integer_line_counts(self) -> None:
        assert IntegerLine().cell_mass(7) == 1.0

    def test_real_line_grid_uses_step(self) -> None:
        assert RealLineGrid(0.01).cell_mass(0) == pytest.approx(0.01)

    def test_log_grid_mass_is_uniform_in_log_coordinates(self) -> None:
        assert PositiveRealsLogGrid(0.01).cell_mass(-50) == pytest.approx(0.01)

    def test_finite_cyclic_counts(self) -> None:
        assert FiniteCyclic(4).measure(CompactWindow.from_range(0, 3)) == 4.0

    def test_invalid_parameters(self) -> None:
        with pytest.raises(ValueError, match="order"):
            FiniteCyclic(0)
        with pytest.raises(ValueError, match="step"):
            RealLineGrid(0.0)
        with pytest.raises(ValueError, match="log_step"):
            PositiveRealsLogGrid(-1.0)


class TestTranslate:
    """Index arithmetic of x * a^m."""

    def test_integer_line(self) -> None:
        assert IntegerLine().translate(5, GroupElement(2), -3) == -1

    def test_finite_cyclic_wraps(self) -> None:
        assert FiniteCyclic(4).translate(3, GroupElement(1), 2) == 1

    def test_real_line_grid_aligned_shift(self) -> None:
        carrier = RealLineGrid(0.5)
        a = carrier.element_from_native(2.0)
        assert a.index == 4
        assert carrier.translate(0, a, 1) == 4

    def test_finite_window_translate_rewraps(self) -> None:
        moved = FiniteCyclic(4).translate_window(CompactWindow.from_range(2, 3), GroupElement(1), 1)
        assert moved.intervals == ((0, 0), (3, 3))

    @seed(11)
    @given(k=st.integers(-500, 500), index=st.integers(-20, 20), m=st.integers(-40, 40), order=st.integers(1, 12))
    def test_round_trip(self, k: int, index: int, m: int, order: int) -> None:
        line = IntegerLine()
        assert line.translate(line.translate(k, GroupElement(index), m), GroupElement(index), -m) == k
        ring = FiniteCyclic(order)
        a = GroupElement(index % order)
        start = k % order
        assert ring.translate(ring.translate(start, a, m), a, -m) == start


class TestSeparationBound:
    """Exact N with K ∩ K a^{±m} = ∅ for every m >= N."""

    def test_interval(self) -> None:
        assert IntegerLine().separation_bound(CompactWindow.from_range(0, 9), GroupElement(2)) == 5

    def test_singleton(self) -> None:
        assert IntegerLine().separation_bound(CompactWindow.from_range(0, 0), GroupElement(1)) == 1

    def test_torsion_element_never_separates(self) -> None:
        assert FiniteCyclic(6).separation_bound(CompactWindow.from_range(0, 2), GroupElement(1)) is None

    def test_identity_is_not_compact_passing(self) -> None:
        assert IntegerLine().separation_bound(CompactWindow.from_range(0, 3), GroupElement(0)) is None
        assert not IntegerLine().passes_through_compacts(GroupElement(0))
        assert IntegerLine().passes_through_compacts(GroupElement(-3))

    def test_gapped_window_scans_below_the_diameter_bound(self) -> None:
        # {0, 10}: the shift by 10 maps 0 onto 10, every other shift misses
        window = CompactWindow.from_indices([0, 10])
        assert IntegerLine().separation_bound(window, GroupElement(1)) == 11
        # {0, 1, 9, 10} with stride 4: shifts by 4 miss, by 8 hit (1 -> 9)
        window = CompactWindow.from_indices([0, 1, 9, 10])
        assert IntegerLine().separation_bound(window, GroupElement(4)) == 3

    def test_empty_window(self) -> None:
        with pytest.raises(EmptyWindowError):
            IntegerLine().separation_bound(CompactWindow.empty(), GroupElement(1))

    @seed(3)
    @given(
        cells=st.sets(st.integers(-25, 25), min_size=1, max_size=12),
        index=st.integers(-7, 7).filter(lambda i: i != 0),
    )
    def test_bound_is_exact(self, cells: set[int], index: int) -> None:
        window = CompactWindow.from_indices(cells)
        carrier = IntegerLine()
        a = GroupElement(index)
        bound = carrier.separation_bound(window, a)
        assert bound is not None
        for m in range(bound, bound + 101):
            assert not window.intersects(carrier.translate_window(window, a, m))
            assert not window.intersects(carrier.translate_window(window, a, -m))
        if bound > 1:
            assert window.intersects(carrier.translate_window(window, a, bound - 1))


class TestTorsionOrder:
    """Orders of elements."""

    @pytest.mark.parametrize(("order", "index", "expected"), [(6, 4, 3), (5, 0, 1), (8, 6, 4), (7, 3, 7)])
    def test_finite_cyclic(self, order: int, index: int, expected: int) -> None:
        assert FiniteCyclic(order).torsion_order(GroupElement(index)) == expected

    def test_line_is_torsion_free(self) -> None:
        assert IntegerLine().torsion_order(GroupElement(3)) is None
        assert IntegerLine().torsion_order(GroupElement(0)) == 1

    @seed(5)
    @given(order=st.integers(1, 16), index=st.integers(0, 15), k=st.integers(0, 15))
    def test_order_returns_home(self, order: int, index: int, k: int) -> None:
        ring = FiniteCyclic(order)
        a = GroupElement(index % order)
        gamma = ring.torsion_order(a)
        assert ring.translate(k % order, a, gamma) == k % order


class TestNativeCoordinates:
    """Grid alignment and window snapping."""

    def test_misaligned_element_names_the_field(self) -> None:
        with pytest.raises(GridAlignmentError, match="^a:"):
            RealLineGrid(0.2).element_from_native(0.3)

    def test_half_is_aligned_on_a_doubling_grid(self) -> None:
        carrier = PositiveRealsLogGrid.from_cells_per_doubling(70)
        assert carrier.log_step == pytest.approx(math.log(2) / 70)
        assert carrier.element_from_native(0.5).index == -70

    def test_log_grid_rejects_non_positive_points(self) -> None:
        with pytest.raises(GridAlignmentError, match="not a positive real"):
            PositiveRealsLogGrid(0.1).window_from_native(0.0, 1.0)

    def test_line_window_snaps_to_grid_points(self) -> None:
        assert RealLineGrid(0.01).window_from_native(-1.0, 1.0) == CompactWindow.from_range(-100, 100)
        assert RealLineGrid(0.05).window_from_native(0.0, 0.25) == CompactWindow.from_range(0, 5)
        assert RealLineGrid(0.25).window_from_native(0.1, 0.2).is_empty

    def test_log_window(self) -> None:
        carrier = PositiveRealsLogGrid.from_cells_per_doubling(70)
        assert carrier.window_from_native(1.0, 2.0) == CompactWindow.from_range(0, 70)

    def test_finite_window_clips_to_residues(self) -> None:
        assert FiniteCyclic(4).window_from_native(-2, 9) == CompactWindow.from_range(0, 3)
        assert FiniteCyclic(4).full_window() == CompactWindow.from_range(0, 3)

    def test_native_coordinates(self) -> None:
        assert RealLineGrid(0.05).native_coordinates(CompactWindow.from_range(79, 80).indices()).tolist() == [3.95, 4.0]
        assert FiniteCyclic(3).native_coordinates(CompactWindow.from_range(2, 4).indices()).tolist() == [2.0, 0.0, 1.0]

    def test_contains_window(self) -> None:
        assert FiniteCyclic(4).contains_window(CompactWindow.from_range(0, 3))
        assert not FiniteCyclic(4).contains_window(CompactWindow.from_range(2, 5))
        assert IntegerLine().contains_window(CompactWindow.from_range(-9, 9))


class TestGetCarrier:
    """Factory wiring."""

    def test_builds_each_variant(self) -> None:
        assert get_carrier(CarrierKind.FINITE_CYCLIC, order=4) == FiniteCyclic(4)
        assert get_carrier(CarrierKind.INTEGER_LINE) == IntegerLine()
        assert get_carrier(CarrierKind.REAL_LINE_GRID, step=0.5) == RealLineGrid(0.5)
        assert get_carrier(CarrierKind.POSITIVE_REALS_LOG_GRID, step=0.1) == PositiveRealsLogGrid(0.1)

    def test_missing_parameters(self) -> None:
        with pytest.raises(ValueError, match="order is required"):
            get_carrier(CarrierKind.FINITE_CYCLIC)
        with pytest.raises(ValueError, match="step is required"):
            get_carrier(CarrierKind.REAL_LINE_GRID)
