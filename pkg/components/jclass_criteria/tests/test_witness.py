"""Unit tests for the witness builders and certificate verification."""

import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from jclass_criteria.witness import (
    WitnessCertificate,
    WitnessConstructionError,
    WitnessKind,
    build_witness_jvector,
    build_witness_torsion,
    build_witness_zero,
    verify,
    verify_certificate,
)
from jclass_interface.carrier import CompactWindow, GroupElement
from lp_grid_impl.carriers import FiniteCyclic, IntegerLine, RealLineGrid
from lp_grid_impl.lp_function import LpFunction
from lp_grid_impl.translation import WeightedTranslation
from lp_grid_impl.weights import ConstantWeight, PiecewiseLinearWeight

pytestmark = pytest.mark.unit

INF = math.inf


@pytest.fixture
def step_down_operator() -> WeightedTranslation:
    """β = 3 left of -1, 1 - x/2 on (-1, 1), α = 2 from 1 on; a = 1 on the 0.25 grid."""
    carrier = RealLineGrid(0.25)
    weight = PiecewiseLinearWeight.from_rows(
        [
            (-INF, -1.0, False, True, 0.0, 3.0),
            (-1.0, 1.0, False, False, -0.5, 1.0),
            (1.0, INF, True, False, 0.0, 2.0),
        ],
    )
    return WeightedTranslation(carrier, carrier.element_from_native(1.0), weight)


@pytest.fixture
def sawtooth_operator() -> WeightedTranslation:
    """Period-2 sawtooth on the 0.05 grid with a = 2."""
    carrier = RealLineGrid(0.05)
    weight = PiecewiseLinearWeight.from_rows(
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
    return WeightedTranslation(carrier, carrier.element_from_native(2.0), weight)


def _cyclic(order: int, value: float) -> WeightedTranslation:
    return WeightedTranslation(FiniteCyclic(order), GroupElement(1), ConstantWeight(value))


def _integers(value: float) -> WeightedTranslation:
    return WeightedTranslation(IntegerLine(), GroupElement(1), ConstantWeight(value))


def _indicator(op: WeightedTranslation, lo: float, hi: float) -> LpFunction:
    return LpFunction.indicator(op.carrier, op.p, op.carrier.window_from_native(lo, hi))


class TestZeroWitness:
    """g close to 0 with T^n g close to f."""

    def test_step_down_weight(self, step_down_operator: WeightedTranslation) -> None:
        f = _indicator(step_down_operator, 0.0, 1.0)
        cert = build_witness_zero(step_down_operator, f, 1e-2, 40)
        assert cert.builder is WitnessKind.ZERO
        # the slowest cell is x = 0.75 with ω̃_n = 1 / (0.625 * 1.125 * 3^(n-2))
        assert cert.n == 7
        assert cert.valid
        assert cert.exceptional == f.support()
        assert cert.g.support() == f.support().shifted(-7 * 4)
        assert verify(cert, step_down_operator)

    def test_image_telescopes_to_the_retained_part(self, step_down_operator: WeightedTranslation) -> None:
        f = _indicator(step_down_operator, 0.0, 1.0).scale(3.0)
        cert = build_witness_zero(step_down_operator, f, 1e-2, 40)
        image = step_down_operator.iterate(cert.g, cert.n)
        idx = cert.exceptional.indices()
        assert image.values_at(idx) == pytest.approx(f.values_at(idx), rel=1e-12)
        assert image.support() == cert.exceptional

    def test_norm_matches_the_change_of_variable(self, step_down_operator: WeightedTranslation) -> None:
        f = _indicator(step_down_operator, 0.0, 1.0)
        cert = build_witness_zero(step_down_operator, f, 1e-2, 40)
        idx = cert.exceptional.indices()
        tilde = np.exp(step_down_operator.products.tilde(idx, cert.n))
        masses = step_down_operator.carrier.cell_masses(idx)
        expected = math.fsum((masses * (tilde * np.abs(f.values_at(idx))) ** 2).tolist()) ** 0.5
        assert cert.norm_base == pytest.approx(expected, rel=1e-12)

    def test_unit_weight_fails(self) -> None:
        op = _integers(1.0)
        with pytest.raises(WitnessConstructionError) as info:
            build_witness_zero(op, LpFunction.indicator(op.carrier, 2.0, CompactWindow.from_range(0, 2)), 1e-2, 30)
        assert info.value.builder is WitnessKind.ZERO
        assert info.value.best_n is not None
        assert info.value.best_sup == pytest.approx(1.0)

    def test_rejects_a_finite_carrier(self) -> None:
        op = _cyclic(4, 2.0)
        with pytest.raises(WitnessConstructionError, match="line carrier"):
            build_witness_zero(op, LpFunction.indicator(op.carrier, 2.0, CompactWindow.from_range(0, 1)), 1e-2, 30)

    def test_rejects_a_zero_target(self) -> None:
        op = _integers(2.0)
        with pytest.raises(WitnessConstructionError, match="nonzero target"):
            build_witness_zero(op, LpFunction.zeros(op.carrier, 2.0), 1e-2, 30)

    def test_respects_the_separation_bound(self) -> None:
        # ω ≡ 4 reaches the thresholds at n = 5, but σ(f) = [0, 9] needs n >= 10
        op = _integers(4.0)
        f = LpFunction.indicator(op.carrier, 2.0, CompactWindow.from_range(0, 9))
        cert = build_witness_zero(op, f, 1e-2, 30)
        assert cert.n == 10

    @seed(53)
    @settings(max_examples=60, deadline=None)
    @given(
        value=st.floats(1.1, 4.0),
        width=st.integers(0, 4),
        tight=st.floats(1e-4, 1e-2),
        factor=st.floats(1.0, 50.0),
    )
    def test_larger_epsilon_never_needs_a_larger_n(self, value: float, width: int, tight: float, factor: float) -> None:
        op = _integers(value)
        f = LpFunction.indicator(op.carrier, 2.0, CompactWindow.from_range(0, width))
        try:
            strict = build_witness_zero(op, f, tight, 80)
        except WitnessConstructionError:
            return
        loose = build_witness_zero(op, f, tight * factor, 80)
        assert loose.n <= strict.n


class TestJVectorWitness:
    """g close to χ_K with T^n g close to f."""

    def test_sawtooth_weight(self, sawtooth_operator: WeightedTranslation) -> None:
        f = _indicator(sawtooth_operator, 3.0, 4.0)
        k_window = sawtooth_operator.carrier.window_from_native(0.0, 0.25)
        cert = build_witness_jvector(sawtooth_operator, f, k_window, 1e-2, 60)
        assert cert.builder is WitnessKind.JVECTOR
        # ω̃_n bottoms out at 2^(n-9) on [3, 4]; the K side needs only n = 13
        assert cert.n == 17
        assert cert.base_point.distance(LpFunction.indicator(sawtooth_operator.carrier, 2.0, k_window)) == 0.0
        assert cert.valid
        assert verify(cert, sawtooth_operator)
        assert any("split" in note for note in cert.notes)

    def test_zero_target(self) -> None:
        op = _integers(0.5)
        k_window = CompactWindow.from_range(0, 1)
        cert = build_witness_jvector(op, LpFunction.zeros(op.carrier, 2.0), k_window, 0.1, 30)
        assert cert.n == 5
        assert cert.norm_base == 0.0
        assert cert.norm_image == pytest.approx(math.sqrt(2) * 0.5**5)
        assert cert.g.distance(LpFunction.indicator(op.carrier, 2.0, k_window)) == 0.0
        assert verify(cert, op)

    def test_growing_weight_fails_on_k(self) -> None:
        op = _integers(2.0)
        f = LpFunction.indicator(op.carrier, 2.0, CompactWindow.from_range(10, 11))
        with pytest.raises(WitnessConstructionError, match="K-side") as info:
            build_witness_jvector(op, f, CompactWindow.from_range(0, 1), 1e-2, 30)
        assert info.value.builder is WitnessKind.JVECTOR

    def test_rejects_an_empty_k(self) -> None:
        op = _integers(2.0)
        with pytest.raises(WitnessConstructionError, match="nonempty K"):
            build_witness_jvector(op, LpFunction.zeros(op.carrier, 2.0), CompactWindow.empty(), 1e-2, 30)


class TestTorsionWitness:
    """h close to 0 with T^{γn} h close to g on Z_γ."""

    def test_constant_two(self) -> None:
        op = _cyclic(4, 2.0)
        g = LpFunction.indicator(op.carrier, 2.0, CompactWindow.from_range(0, 1))
        cert = build_witness_torsion(op, g, 1e-3, 0.5, 20)
        assert cert.builder is WitnessKind.TORSION
        # 2^-m < 1e-3 / sqrt(2) first holds on a full cycle at m = 12
        assert cert.n == 12
        assert cert.g.values.tolist() == pytest.approx([2.0**-12, 2.0**-12, 0.0, 0.0])
        assert op.iterate(cert.g, cert.n).values.tolist() == pytest.approx(g.values.tolist(), rel=1e-12)
        assert verify(cert, op)

    def test_norm_bound(self) -> None:
        op = _cyclic(3, 1.5)
        g = LpFunction.from_mapping(op.carrier, 2.0, {0: 2.0, 2: -1.0})
        cert = build_witness_torsion(op, g, 1e-2, 0.5, 40)
        idx = cert.exceptional.indices()
        bound = float(np.max(np.exp(-2 * op.products.forward(idx, cert.n)))) * g.p_norm() ** 2
        assert cert.norm_base**2 <= bound * (1 + 1e-12)

    def test_isometry_fails(self) -> None:
        op = _cyclic(4, 1.0)
        with pytest.raises(WitnessConstructionError) as info:
            build_witness_torsion(op, LpFunction.indicator(op.carrier, 2.0, CompactWindow.from_range(0, 1)), 1e-3, 0.5, 20)
        assert info.value.best_sup == pytest.approx(1.0)

    def test_rejects_a_line(self) -> None:
        op = _integers(2.0)
        with pytest.raises(WitnessConstructionError, match="finite cyclic"):
            build_witness_torsion(op, LpFunction.indicator(op.carrier, 2.0, CompactWindow.from_range(0, 1)), 1e-3, 0.5, 20)


class TestVerify:
    """Independent recomputation of certificate norms."""

    def test_tampered_vector(self, step_down_operator: WeightedTranslation) -> None:
        f = _indicator(step_down_operator, 0.0, 1.0)
        cert = build_witness_zero(step_down_operator, f, 1e-2, 40)
        tampered = dataclasses.replace(cert, g=cert.g.scale(2.0))
        assert tampered.valid
        assert not verify(tampered, step_down_operator)

    def test_tightened_epsilon(self, step_down_operator: WeightedTranslation) -> None:
        f = _indicator(step_down_operator, 0.0, 1.0)
        cert = build_witness_zero(step_down_operator, f, 1e-2, 40)
        tightened = dataclasses.replace(cert, epsilon=cert.norm_base / 2)
        result = verify_certificate(tightened, step_down_operator)
        assert not result.valid
        assert "base" in result.reason

    def test_both_paths_are_reported(self) -> None:
        op = _cyclic(4, 2.0)
        g = LpFunction.indicator(op.carrier, 2.0, CompactWindow.from_range(0, 1))
        result = verify_certificate(build_witness_torsion(op, g, 1e-3, 0.5, 20), op)
        assert result.valid
        assert result.paths_agree
        assert not result.repeated_path_skipped
        assert result.norm_image_repeated == pytest.approx(result.norm_image_closed_form, abs=1e-12)

    def test_large_powers_skip_the_repeated_path(self) -> None:
        op = _cyclic(4, 1.0)
        g = LpFunction.indicator(op.carrier, 2.0, CompactWindow.from_range(0, 0))
        cert = WitnessCertificate(
            builder=WitnessKind.TORSION,
            base_point=LpFunction.zeros(op.carrier, 2.0),
            target=g,
            n=6000,
            g=g,
            norm_base=1.0,
            norm_image=0.0,
            epsilon=2.0,
        )
        result = verify_certificate(cert, op)
        assert result.repeated_path_skipped
        assert result.norm_image_repeated is None
        assert result.valid
        record = cert.to_record(result)
        assert record["repeated_path_skipped"] is True
        assert record["valid"] is True

    def test_record(self) -> None:
        op = _cyclic(4, 2.0)
        g = LpFunction.indicator(op.carrier, 2.0, CompactWindow.from_range(0, 1))
        record = build_witness_torsion(op, g, 1e-3, 0.5, 20).to_record()
        assert record["builder"] == "torsion"
        assert record["n"] == 12
        assert record["valid"] is True
        assert record["repeated_path_skipped"] is None
        assert set(record) == {"builder", "n", "epsilon", "norm_base", "norm_image", "valid", "repeated_path_skipped"}
