"""Built-in scenarios for the three worked examples."""

from __future__ import annotations

import math
from typing import Any

from jclass_lab.config import Scenario, parse_scenario
from jclass_lab.exceptions import ConfigError

INF = math.inf

EXAMPLE_IDS = (1, 2, 3)

NON_HYPERCYCLIC_NOTE = (
    "T is not hypercyclic by the known characterization of hypercyclic weighted translations (cited, not computed)"
)

DEFAULT_ALPHA = 2.0
DEFAULT_BETA = 3.0


def _step_down(alpha: float, beta: float) -> dict[str, Any]:
    if not 1 < alpha < beta:
        raise ConfigError([f"alpha, beta: need 1 < alpha < beta, got alpha={alpha:g}, beta={beta:g}"])
    return {
        "name": "example-1",
        "notes": [NON_HYPERCYCLIC_NOTE],
        "carrier": {"kind": "real_line_grid", "step": 0.01},
        "operator": {"a": 1.0},
        "weight": {
            "kind": "piecewise_linear",
            "segments": [
                {"lo": -INF, "hi": -1.0, "hi_inclusive": True, "intercept": beta},
                {"lo": -1.0, "hi": 1.0, "slope": -0.5, "intercept": 1.0},
                {"lo": 1.0, "hi": INF, "lo_inclusive": True, "intercept": alpha},
            ],
        },
        "windows": {"probe": [(-1.0, 1.0)]},
        "target": [{"lo": 0.0, "hi": 1.0}],
    }


def _doubling() -> dict[str, Any]:
    # 70 cells per doubling put a = 1/2 on the grid
    return {
        "name": "example-2",
        "notes": [NON_HYPERCYCLIC_NOTE],
        "carrier": {"kind": "positive_reals_log_grid", "cells_per_doubling": 70},
        "operator": {"a": 0.5},
        "weight": {"kind": "exponential", "rate": 1.0},
        "windows": {"probe": [(1.0, 2.0)]},
        "target": [{"lo": 1.0, "hi": 2.0}],
    }


def _sawtooth() -> dict[str, Any]:
    # the case table leaves x = 0 open on both sides; both one-sided limits are 1/4
    return {
        "name": "example-3",
        "notes": [NON_HYPERCYCLIC_NOTE],
        "carrier": {"kind": "real_line_grid", "step": 0.05},
        "operator": {"a": 2.0},
        "weight": {
            "kind": "piecewise_linear",
            "segments": [
                {"lo": -INF, "hi": -1.0, "hi_inclusive": True, "intercept": 2.0},
                {"lo": -1.0, "hi": 0.0, "slope": -1.75, "intercept": 0.25},
                {"lo": 0.0, "hi": 1.0, "lo_inclusive": True, "hi_inclusive": True, "slope": 1.75, "intercept": 0.25},
                {"lo": 1.0, "hi": 2.0, "hi_inclusive": True, "slope": -1.75, "intercept": 3.75},
            ],
            "period_start": 2.0,
            "period": 2.0,
            "require_continuous": True,
        },
        "windows": {"probe": [(3.0, 4.0)], "k": (0.0, 0.25)},
        "target": [{"lo": 3.0, "hi": 4.0}],
    }


def builtin_scenario(example_id: int, *, alpha: float | None = None, beta: float | None = None) -> Scenario:
    """Return the scenario of a worked example.

    1: piecewise weight β | 1 - x/2 | α on (R, +), a = 1, h = 0.01, probe [-1, 1].
    2: ω(x) = exp(x) on (R+, ×), a = 1/2, 70 cells per doubling, probe [1, 2].
    3: period-2 sawtooth on (R, +), a = 2, h = 0.05, K = [0, 1/4], probe and target [3, 4].

    Raises:
        ConfigError: For an unknown id, α or β given for examples 2 and 3, or 1 < α < β violated.

    """
    if example_id not in EXAMPLE_IDS:
        raise ConfigError([f"example: unknown example {example_id}, expected one of {EXAMPLE_IDS}"])
    if example_id == 1:
        return parse_scenario(_step_down(DEFAULT_ALPHA if alpha is None else alpha, DEFAULT_BETA if beta is None else beta))
    if alpha is not None or beta is not None:
        raise ConfigError([f"alpha, beta: only example 1 takes free parameters, got example {example_id}"])
    return parse_scenario(_doubling() if example_id == 2 else _sawtooth())  # noqa: PLR2004
