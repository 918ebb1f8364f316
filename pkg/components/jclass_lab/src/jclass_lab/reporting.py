"""CSV report data.

Every file has a header row, comma separators and '.' decimals. Floats below 1e-4 in magnitude are written
in scientific notation, everything else in the shortest round-trip form, so identical inputs produce
byte-identical files. Rows only carry values returned by the library; nothing is recomputed here.
"""

# to avoid having to consider forward declarations, the below line must be first line in the file
from __future__ import annotations

import csv
import logging
import math
from typing import TYPE_CHECKING, Any

import numpy as np

from jclass_criteria.criteria import decay_profile, torsion_profile
from lp_grid_impl.lp_function import LpFunction

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence
    from pathlib import Path

    from jclass_criteria.reports import Verdict
    from jclass_interface.carrier import CompactWindow, GroupCarrier
    from jclass_lab.config import Lab

logger = logging.getLogger(__name__)

SCIENTIFIC_BELOW = 1e-4

WEIGHT_PROFILE_CSV = "weight_profile.csv"
PRODUCTS_CSV = "products.csv"
ORBIT_NORMS_CSV = "orbit_norms.csv"
WITNESS_CSV = "witness.csv"
ORACLE_TRIALS_CSV = "oracle_trials.csv"

WEIGHT_PROFILE_FIELDS = ("index", "native_x", "omega", "log_omega")
PRODUCTS_FIELDS = ("window", "n", "max_tilde", "residual_mass", "max_omega_on_k")
PRODUCTS_FINITE_FIELDS = ("window", "n", "max_inverse_omega", "residual_mass")
ORBIT_NORMS_FIELDS = ("function", "m", "norm")
WITNESS_FIELDS = ("builder", "n", "epsilon", "norm_base", "norm_image", "valid", "repeated_path_skipped")


def format_cell(value: Any) -> str:  # noqa: ANN401
    """Render one CSV value."""
    if value is None:
        return ""
    if isinstance(value, bool | np.bool_):
        return "true" if value else "false"
    if isinstance(value, float | np.floating):
        v = float(value)
        if math.isfinite(v) and 0 < abs(v) < SCIENTIFIC_BELOW:
            return f"{v:.15e}"
        return repr(v)
    return str(value)


def write_csv(path: Path, fields: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> Path:
    """Write rows under a header, creating the directory if needed."""
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(fields), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({name: format_cell(row[name]) for name in fields})
            count += 1
    logger.info("Wrote %d rows to %s", count, path)
    return path


def native_interval(carrier: GroupCarrier, window: CompactWindow) -> str:
    """Return '[lo, hi]' in native coordinates (the hull, for multi-interval windows)."""
    x = carrier.native_coordinates(np.array([window.lo, window.hi], dtype=np.int64))
    return f"[{float(x[0]):g}, {float(x[1]):g}]"


def verdict_label(carrier: GroupCarrier, verdict: Verdict) -> str:
    """Return the verdict label with K in native coordinates, e.g. 'JClassWithIndicatorVector(K=[0, 0.25])'."""
    if verdict.indicator_window is None:
        return verdict.label
    return f"{verdict.classification}(K={native_interval(carrier, verdict.indicator_window)})"


# ---------------------------------------------------------------------------
# Row builders
# ---------------------------------------------------------------------------


def weight_profile_rows(lab: Lab) -> list[dict[str, Any]]:
    """Return (index, native_x, omega, log_omega) over Lab.profile_window."""
    indices = lab.profile_window().indices()
    weight = lab.operator.weight
    logs = weight.log_values(lab.carrier, indices)
    x = lab.carrier.native_coordinates(indices)
    values = weight.values(lab.carrier, indices)
    return [
        {"index": int(k), "native_x": float(xk), "omega": float(v), "log_omega": float(lv)}
        for k, xk, v, lv in zip(indices.tolist(), x.tolist(), values.tolist(), logs.tolist(), strict=True)
    ]


def products_fields(carrier: GroupCarrier) -> tuple[str, ...]:
    """Return the products.csv header that fits the carrier."""
    return PRODUCTS_FINITE_FIELDS if carrier.is_finite else PRODUCTS_FIELDS


def products_rows(lab: Lab) -> list[dict[str, Any]]:
    """Return the per-n products of every probe window, labelled by its native interval.

    Line carriers get the tilde decay profile; finite cyclic carriers get the inverse products ω_n^{-1}
    the torsion condition is decided on.
    """
    tolerances = lab.scenario.tolerances
    rows: list[dict[str, Any]] = []
    for window in lab.probe_windows:
        label = native_interval(lab.carrier, window)
        if lab.carrier.is_finite:
            rows.extend(
                {"window": label, "n": row.n, "max_inverse_omega": row.max_inverse, "residual_mass": row.residual_mass}
                for row in torsion_profile(lab.operator, window, tolerances.epsilon, tolerances.n_max)
            )
            continue
        for row in decay_profile(lab.operator, window, tolerances.epsilon, tolerances.n_max, lab.k_window):
            rows.append(
                {
                    "window": label,
                    "n": row.n,
                    "max_tilde": row.max_tilde,
                    "residual_mass": row.residual_mass,
                    "max_omega_on_k": row.max_omega_on_k,
                }
            )
    return rows


def orbit_rows(lab: Lab) -> list[dict[str, Any]]:
    """Return ‖T^m f‖_p for m = 0..orbit_steps, for the target and, when K is set, for χ_K."""
    functions = [("target", lab.target)]
    if lab.k_window is not None:
        functions.append(("chi_K", LpFunction.indicator(lab.carrier, lab.operator.p, lab.k_window)))
    steps = lab.scenario.output.orbit_steps
    return [
        {"function": name, "m": m, "norm": norm}
        for name, f in functions
        for m, norm in lab.operator.orbit_norms(f, steps)
    ]
