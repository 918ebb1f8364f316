"""Scenario files.

A scenario is a TOML document with the sections [carrier], [operator], [weight], [windows], [[target]],
[tolerances] and [output]. Field-level checks are done by the pydantic models below; the checks that need
the concrete carrier (grid alignment of a, window contents, weight positivity on the evaluation range) run
in build_lab. Both report failures as '<field path>: <reason>' lines through ConfigError.
"""

# to avoid having to consider forward declarations, the below line must be first line in the file
from __future__ import annotations

import logging
import tomllib
from dataclasses import dataclass
from typing import TYPE_CHECKING, Annotated, Any, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from jclass_criteria.criteria import DEFAULT_EPSILON, DEFAULT_N_MAX
from jclass_interface.carrier import CarrierKind, CompactWindow
from jclass_interface.exceptions import JClassLabError
from jclass_interface.weight import WeightKind
from jclass_lab.exceptions import ConfigError
from lp_grid_impl.carriers import PositiveRealsLogGrid, get_carrier
from lp_grid_impl.lp_function import LpFunction
from lp_grid_impl.translation import WeightedTranslation
from lp_grid_impl.weights import ConstantWeight, ExponentialWeight, LogTableWeight, PiecewiseLinearWeight, Segment
from matrix_oracle.trials import TrialSettings

if TYPE_CHECKING:
    from collections.abc import Callable
    from pathlib import Path

    from jclass_interface.carrier import GroupCarrier
    from jclass_interface.weight import Weight

logger = logging.getLogger(__name__)

T = TypeVar("T")

PositiveFloat = Annotated[float, Field(gt=0, allow_inf_nan=False)]
PositiveInt = Annotated[int, Field(ge=1)]
Interval = tuple[float, float]

DEFAULT_WITNESS_EPSILON = 1e-2
DEFAULT_ORBIT_STEPS = 60
DEFAULT_OUT = "out"

# Domain messages that already lead with the field name they concern
_FIELD_PREFIXES = ("a: ", "window: ")


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class CarrierSection(_Section):
    """[carrier]: the group model and its grid parameter."""

    kind: CarrierKind
    order: int | None = Field(default=None, ge=2)
    step: PositiveFloat | None = None
    cells_per_doubling: PositiveInt | None = None

    @model_validator(mode="after")
    def _parameters(self) -> CarrierSection:
        if self.kind is CarrierKind.FINITE_CYCLIC and self.order is None:
            msg = "order is required for finite_cyclic"
            raise ValueError(msg)
        if self.cells_per_doubling is not None:
            if self.kind is not CarrierKind.POSITIVE_REALS_LOG_GRID:
                msg = "cells_per_doubling only applies to positive_reals_log_grid"
                raise ValueError(msg)
            if self.step is not None:
                msg = "give either step or cells_per_doubling, not both"
                raise ValueError(msg)
        elif self.kind in (CarrierKind.REAL_LINE_GRID, CarrierKind.POSITIVE_REALS_LOG_GRID) and self.step is None:
            msg = f"step is required for {self.kind}"
            raise ValueError(msg)
        return self

    def build(self) -> GroupCarrier:
        """Return the concrete carrier."""
        if self.cells_per_doubling is not None:
            return PositiveRealsLogGrid.from_cells_per_doubling(self.cells_per_doubling)
        return get_carrier(self.kind, order=self.order, step=self.step)


class OperatorSection(_Section):
    """[operator]: the element a in native coordinates and the exponent p."""

    a: float = Field(allow_inf_nan=False)
    p: float = Field(default=2.0, ge=1.0, allow_inf_nan=False)


class SegmentRow(_Section):
    """One case-table row: slope * x + intercept on the interval between lo and hi."""

    lo: float
    hi: float
    lo_inclusive: bool = False
    hi_inclusive: bool = False
    slope: float = 0.0
    intercept: float


class WeightSection(_Section):
    """[weight]: the weight family and its parameters."""

    kind: WeightKind
    value: PositiveFloat | None = None
    rate: float | None = Field(default=None, allow_inf_nan=False)
    log_table: list[float] | None = None
    segments: list[SegmentRow] = Field(default_factory=list)
    period_start: float | None = None
    period: PositiveFloat | None = None
    require_continuous: bool = False

    @model_validator(mode="after")
    def _parameters(self) -> WeightSection:
        required = {
            WeightKind.CONSTANT: ("value", self.value is not None),
            WeightKind.EXPONENTIAL: ("rate", self.rate is not None),
            WeightKind.LOG_TABLE: ("log_table", bool(self.log_table)),
            WeightKind.PIECEWISE_LINEAR: ("segments", bool(self.segments)),
        }
        name, present = required[self.kind]
        if not present:
            msg = f"{name} is required for a {self.kind} weight"
            raise ValueError(msg)
        return self

    def build(self) -> Weight:
        """Return the concrete weight."""
        if self.kind is WeightKind.CONSTANT:
            return ConstantWeight(self.value or 0.0)
        if self.kind is WeightKind.EXPONENTIAL:
            return ExponentialWeight(self.rate or 0.0)
        if self.kind is WeightKind.LOG_TABLE:
            return LogTableWeight(tuple(self.log_table or ()))
        segments = tuple(Segment(s.lo, s.hi, s.lo_inclusive, s.hi_inclusive, s.slope, s.intercept) for s in self.segments)
        return PiecewiseLinearWeight(segments, self.period_start, self.period, self.require_continuous)


class WindowsSection(_Section):
    """[windows]: probe windows Δ and the optional indicator support K, in native coordinates."""

    probe: list[Interval] = Field(default_factory=list)
    k: Interval | None = None

    @model_validator(mode="after")
    def _ordered(self) -> WindowsSection:
        for lo, hi in [*self.probe, *([self.k] if self.k else [])]:
            if lo > hi:
                msg = f"window [{lo:g}, {hi:g}] has lo > hi"
                raise ValueError(msg)
        return self


class TargetSection(_Section):
    """One [[target]] entry: amplitude times the indicator of [lo, hi]."""

    lo: float
    hi: float
    amplitude: float = Field(default=1.0, allow_inf_nan=False)


class TolerancesSection(_Section):
    """[tolerances]: product threshold, exceptional measure, search bound and witness accuracy."""

    epsilon: PositiveFloat = DEFAULT_EPSILON
    delta: PositiveFloat | None = None
    n_max: PositiveInt = DEFAULT_N_MAX
    witness_epsilon: PositiveFloat = DEFAULT_WITNESS_EPSILON


class OutputSection(_Section):
    """[output]: report directory and orbit length."""

    directory: str = DEFAULT_OUT
    orbit_steps: PositiveInt = DEFAULT_ORBIT_STEPS


class Scenario(_Section):
    """A complete scenario file."""

    name: str = "scenario"
    notes: list[str] = Field(default_factory=list)
    carrier: CarrierSection
    operator: OperatorSection
    weight: WeightSection
    windows: WindowsSection = Field(default_factory=WindowsSection)
    target: list[TargetSection] = Field(default_factory=list)
    tolerances: TolerancesSection = Field(default_factory=TolerancesSection)
    output: OutputSection = Field(default_factory=OutputSection)

    def with_overrides(
        self,
        *,
        epsilon: float | None = None,
        delta: float | None = None,
        n_max: int | None = None,
        witness_epsilon: float | None = None,
        target: Interval | None = None,
    ) -> Scenario:
        """Return a re-validated copy with command-line values replacing the file values."""
        data = self.model_dump()
        updates = {"epsilon": epsilon, "delta": delta, "n_max": n_max, "witness_epsilon": witness_epsilon}
        data["tolerances"].update({k: v for k, v in updates.items() if v is not None})
        if target is not None:
            data["target"] = [{"lo": target[0], "hi": target[1]}]
        return parse_scenario(data)


class OracleOptions(_Section):
    """Options of the oracle command."""

    gamma: int = Field(default=4, ge=2, le=16)
    trials: int = Field(default=200, ge=0)
    seed: int = 0
    n_max: PositiveInt = DEFAULT_N_MAX
    eta: PositiveFloat = 1e-3
    delta: PositiveFloat = 0.5

    def to_settings(self) -> TrialSettings:
        """Return the trial settings with γ fixed."""
        return TrialSettings(
            count=self.trials, base_seed=self.seed, n_max=self.n_max, eta=self.eta, delta=self.delta, order=self.gamma
        )


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------


def _messages(error: ValidationError) -> list[str]:
    lines = []
    for item in error.errors():
        path = ".".join(str(part) for part in item["loc"]) or "scenario"
        lines.append(f"{path}: {item['msg'].removeprefix('Value error, ')}")
    return lines


def parse_scenario(data: dict[str, Any]) -> Scenario:
    """Validate a parsed document.

    Raises:
        ConfigError: With one message per failing field.

    """
    try:
        return Scenario.model_validate(data)
    except ValidationError as e:
        raise ConfigError(_messages(e)) from e


def parse_oracle_options(data: dict[str, Any]) -> OracleOptions:
    """Validate the oracle command options.

    Raises:
        ConfigError: With one message per failing option.

    """
    try:
        return OracleOptions.model_validate(data)
    except ValidationError as e:
        raise ConfigError(_messages(e)) from e


def load_scenario(path: Path) -> Scenario:
    """Read and validate a TOML scenario file.

    Raises:
        ConfigError: If the file cannot be read, is not valid TOML, or fails validation.

    """
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError([f"config: cannot read {path} ({e.strerror})"]) from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError([f"config: {path} is not valid TOML ({e})"]) from e
    logger.debug("Loaded scenario file %s", path)
    return parse_scenario(data)


# ---------------------------------------------------------------------------
# Domain objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lab:
    """A validated scenario together with the objects the commands work on."""

    scenario: Scenario
    operator: WeightedTranslation
    probe_windows: tuple[CompactWindow, ...]
    k_window: CompactWindow | None
    target: LpFunction
    evaluation_range: CompactWindow

    @property
    def carrier(self) -> GroupCarrier:
        """Return the operator's carrier."""
        return self.operator.carrier

    def configured_windows(self) -> list[CompactWindow]:
        """Return the probe windows, K and the target support."""
        windows = [*self.probe_windows, self.target.support()]
        if self.k_window is not None:
            windows.append(self.k_window)
        return [w for w in windows if not w.is_empty]

    def profile_window(self) -> CompactWindow:
        """Return the cells of weight_profile.csv: the whole group, or the configured hull widened by one step of a."""
        order = self.carrier.group_order
        if order is not None:
            return CompactWindow.from_range(0, order - 1)
        hull = _hull(self.configured_windows())
        margin = abs(self.operator.a.index)
        return CompactWindow.from_range(hull.lo - margin, hull.hi + margin)


def _hull(windows: list[CompactWindow]) -> CompactWindow:
    merged = CompactWindow.empty()
    for window in windows:
        merged = merged.union(window)
    return merged.hull()


def _checked(path: str, action: Callable[[], T]) -> T:
    try:
        return action()
    except (JClassLabError, ValueError) as e:
        reason = str(e)
        for prefix in _FIELD_PREFIXES:
            reason = reason.removeprefix(prefix)
        raise ConfigError([f"{path}: {reason}"]) from e


def _window(carrier: GroupCarrier, path: str, interval: Interval) -> CompactWindow:
    lo, hi = interval
    window = _checked(path, lambda: carrier.window_from_native(lo, hi))
    if window.is_empty:
        raise ConfigError([f"{path}: [{lo:g}, {hi:g}] contains no grid point of {carrier}"])
    return window


def _evaluation_range(carrier: GroupCarrier, windows: list[CompactWindow], a_index: int, n_max: int) -> CompactWindow:
    order = carrier.group_order
    if order is not None:
        return CompactWindow.from_range(0, order - 1)
    hull = _hull(windows)
    reach = n_max * abs(a_index)
    return CompactWindow.from_range(hull.lo - reach, hull.hi + reach)


def build_lab(scenario: Scenario) -> Lab:
    """Build the operator, windows and target of a scenario.

    The weight must be defined and strictly positive on the hull of every configured window widened by
    n_max·|a| cells (the whole group on a finite cyclic carrier), which is where the products are evaluated.

    Raises:
        ConfigError: If a is not a grid point, a window holds no grid point, or the weight fails on the
            evaluation range.

    """
    carrier = _checked("carrier", scenario.carrier.build)
    weight = _checked("weight", scenario.weight.build)
    a = _checked("operator.a", lambda: carrier.element_from_native(scenario.operator.a))
    operator = _checked("operator", lambda: WeightedTranslation(carrier, a, weight, scenario.operator.p))

    probes = tuple(_window(carrier, f"windows.probe.{i}", w) for i, w in enumerate(scenario.windows.probe))
    if not probes:
        if carrier.group_order is None:
            raise ConfigError(["windows.probe: at least one probe window is required on a line carrier"])
        probes = (CompactWindow.from_range(0, carrier.group_order - 1),)
    k_window = None if scenario.windows.k is None else _window(carrier, "windows.k", scenario.windows.k)

    p = scenario.operator.p
    target = LpFunction.zeros(carrier, p)
    for i, entry in enumerate(scenario.target):
        window = _window(carrier, f"target.{i}", (entry.lo, entry.hi))
        target = target.add(LpFunction.indicator(carrier, p, window, entry.amplitude))
    if not scenario.target:
        target = LpFunction.indicator(carrier, p, probes[0])

    windows = [*probes, target.support(), *([k_window] if k_window is not None else [])]
    evaluation = _evaluation_range(carrier, [w for w in windows if not w.is_empty], a.index, scenario.tolerances.n_max)
    indices = evaluation.indices()
    _checked("weight", lambda: weight.log_values(carrier, indices))
    x = carrier.native_coordinates(np.array([evaluation.lo, evaluation.hi], dtype=np.int64))
    logger.debug("Weight checked on %d cells, native range [%g, %g]", len(indices), x[0], x[1])
    if isinstance(weight, PiecewiseLinearWeight) and weight.jumps():
        logger.warning("Weight of %s is discontinuous at x = %s", scenario.name, ", ".join(f"{j.at:g}" for j in weight.jumps()))

    logger.info("Built %s: %s", scenario.name, operator)
    return Lab(scenario, operator, probes, k_window, target, evaluation)
