"""Unit tests for the index-space value types of the carrier contract."""

import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st

from jclass_interface.carrier import CompactWindow, GroupCarrier, GroupElement
from jclass_interface.exceptions import EmptyWindowError, JClassLabError
from jclass_interface.weight import Weight

pytestmark = pytest.mark.unit

index_sets = st.sets(st.integers(min_value=-30, max_value=30), max_size=25)


class TestCompactWindowNormalisation:
    """Intervals are sorted, merged and validated on construction."""

    def test_overlapping_and_adjacent_intervals_merge(self) -> None:
        window = CompactWindow(((5, 7), (0, 2), (3, 4)))
        assert window.intervals == ((0, 7),)

    def test_gaps_are_kept(self) -> None:
        window = CompactWindow.from_indices([1, 2, 3, 7])
        assert window.intervals == ((1, 3), (7, 7))

    def test_inverted_interval_is_rejected(self) -> None:
        with pytest.raises(ValueError, match="lo > hi"):
            CompactWindow(((3, 1),))

    def test_empty_window_has_no_bounds(self) -> None:
        window = CompactWindow.empty()
        assert window.is_empty
        assert window.cell_count == 0
        assert window.indices().size == 0
        with pytest.raises(EmptyWindowError):
            _ = window.lo

    def test_str_rendering(self) -> None:
        assert str(CompactWindow.from_indices([0, 1, 5])) == "[0, 1] ∪ [5, 5]"
        assert str(CompactWindow.empty()) == "∅"


class TestCompactWindowQueries:
    """Bounds, membership and diameters."""

    def test_bounds_and_diameter(self) -> None:
        window = CompactWindow(((-3, 0), (4, 9)))
        assert (window.lo, window.hi, window.diameter) == (-3, 9, 12)
        assert window.cell_count == 10

    def test_contains(self) -> None:
        window = CompactWindow(((-3, 0), (4, 9)))
        assert window.contains(-3)
        assert window.contains(9)
        assert not window.contains(2)

    def test_hull_fills_gaps(self) -> None:
        assert CompactWindow(((0, 1), (5, 6))).hull() == CompactWindow.from_range(0, 6)


class TestCompactWindowAlgebra:
    """Exact integer set algebra."""

    def test_intersection(self) -> None:
        left = CompactWindow(((0, 5), (10, 15)))
        right = CompactWindow.from_range(3, 12)
        assert left.intersection(right).intervals == ((3, 5), (10, 12))

    def test_difference(self) -> None:
        left = CompactWindow.from_range(0, 9)
        right = CompactWindow.from_range(3, 5)
        assert left.difference(right).intervals == ((0, 2), (6, 9))

    def test_shift_and_intersects(self) -> None:
        window = CompactWindow.from_range(0, 9)
        assert window.intersects(window.shifted(8))
        assert not window.intersects(window.shifted(10))

    def test_subset(self) -> None:
        assert CompactWindow.from_range(2, 3).is_subset(CompactWindow.from_range(0, 9))
        assert not CompactWindow.from_range(8, 12).is_subset(CompactWindow.from_range(0, 9))

    @seed(7)
    @given(left=index_sets, right=index_sets)
    def test_algebra_matches_python_sets(self, left: set[int], right: set[int]) -> None:
        a = CompactWindow.from_indices(left)
        b = CompactWindow.from_indices(right)
        assert set(a.union(b).indices().tolist()) == left | right
        assert set(a.intersection(b).indices().tolist()) == left & right
        assert set(a.difference(b).indices().tolist()) == left - right
        assert a.intersects(b) == bool(left & right)


class TestGroupElement:
    """Powers are unreduced index multiples."""

    @pytest.mark.parametrize(("index", "m", "expected"), [(2, -3, -6), (0, 5, 0), (-70, 2, -140)])
    def test_power(self, index: int, m: int, expected: int) -> None:
        assert GroupElement(index).power(m) == expected


class TestContracts:
    """The abstract bases cannot be instantiated and errors share one root."""

    def test_abstract_bases(self) -> None:
        with pytest.raises(TypeError):
            GroupCarrier()  # type: ignore[abstract]
        with pytest.raises(TypeError):
            Weight()  # type: ignore[abstract]

    def test_empty_window_error_is_lab_error(self) -> None:
        assert issubclass(EmptyWindowError, JClassLabError)

    def test_indices_are_int64(self) -> None:
        assert CompactWindow.from_range(0, 3).indices().dtype == np.int64
