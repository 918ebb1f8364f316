"""Randomised agreement trials between the torsion checker and the matrix oracle."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from jclass_criteria.criteria import check_torsion_condition
from jclass_interface.carrier import CompactWindow, GroupElement
from lp_grid_impl.carriers import FiniteCyclic
from lp_grid_impl.translation import WeightedTranslation
from lp_grid_impl.weights import LogTableWeight
from matrix_oracle.oracle import inverse_power_report, to_matrix

logger = logging.getLogger(__name__)

TRIAL_FIELDS = ("seed", "gamma", "verdict_checker", "verdict_oracle", "min_norm", "n_argmin")

MIN_ORDER = 2
MAX_ORDER = 8


@dataclass(frozen=True)
class TrialSettings:
    """Parameters shared by every trial of a run."""

    count: int = 200
    base_seed: int = 0
    n_max: int = 500
    eta: float = 1e-3
    delta: float = 0.5
    boundary_fraction: float = 0.1
    order: int | None = None


@dataclass(frozen=True)
class TrialResult:
    """One random instance with both verdicts."""

    seed: int
    gamma: int
    verdict_checker: bool
    verdict_oracle: bool
    min_norm: float
    n_argmin: int
    near_boundary: bool

    @property
    def agrees(self) -> bool:
        """Return True when checker and oracle agree."""
        return self.verdict_checker == self.verdict_oracle

    def to_record(self) -> dict[str, Any]:
        """Return the CSV row."""
        row = asdict(self)
        return {name: row[name] for name in TRIAL_FIELDS}


def random_operator(seed: int, order: int | None = None) -> WeightedTranslation:
    """Draw γ in 2..8 (unless order fixes it), a in 1..γ-1 and log-weights uniform in [-1, 1] from a per-trial generator."""
    rng = np.random.default_rng(seed)
    gamma = order if order is not None else int(rng.integers(MIN_ORDER, MAX_ORDER + 1))
    a = int(rng.integers(1, gamma))
    logs = rng.uniform(-1.0, 1.0, size=gamma)
    return WeightedTranslation(FiniteCyclic(gamma), GroupElement(a), LogTableWeight(tuple(logs.tolist())))


def run_trial(seed: int, settings: TrialSettings) -> TrialResult:
    """Compare check_torsion_condition on the full group with the oracle's operator-norm criterion."""
    operator = random_operator(seed, settings.order)
    gamma = operator.carrier.group_order or 0
    report = inverse_power_report(to_matrix(operator), settings.n_max)
    n_argmin, min_norm = report.argmin()
    oracle = min(report.log_norms) < math.log(settings.eta)
    checker = check_torsion_condition(
        operator, CompactWindow.from_range(0, gamma - 1), settings.eta, settings.delta, settings.n_max
    ).holds
    result = TrialResult(
        seed=seed,
        gamma=gamma,
        verdict_checker=checker,
        verdict_oracle=oracle,
        min_norm=min_norm,
        n_argmin=n_argmin,
        near_boundary=abs(min_norm - settings.eta) < settings.boundary_fraction * settings.eta,
    )
    if not result.agrees and not result.near_boundary:
        logger.warning("Trial %d (γ=%d): checker=%s oracle=%s min norm %.6g", seed, gamma, checker, oracle, min_norm)
    return result


def run_trials(settings: TrialSettings | None = None) -> list[TrialResult]:
    """Run settings.count trials with seeds base_seed, base_seed + 1, ..."""
    settings = settings or TrialSettings()
    results = [run_trial(settings.base_seed + i, settings) for i in range(settings.count)]
    decided = [r for r in results if not r.near_boundary]
    logger.info(
        "%d trials, %d away from the boundary, %d disagreements",
        len(results),
        len(decided),
        sum(not r.agrees for r in decided),
    )
    return results


def disagreements(results: list[TrialResult]) -> list[TrialResult]:
    """Return the trials away from the boundary where checker and oracle differ."""
    return [r for r in results if not r.near_boundary and not r.agrees]
