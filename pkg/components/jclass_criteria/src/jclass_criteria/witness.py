"""Constructive witnesses for extended limit sets, and their independent verification.

Each builder scans n for a sublevel set E of the relevant weight product, builds the approximating
vector g entirely in the log domain, and records both approximation norms:

    zero       g = shift_n(ω̃_n · f χ_E)            base point 0,   T^n g = f χ_E
    jvector    g = shift_n(ω̃_n · f χ_E) + χ_K      base point χ_K, T^n g = f χ_E + T^n χ_K
    torsion    h = S^{γn}(g χ_E)                    base point 0,   T^{γn} h = g χ_E
"""

# to avoid having to consider forward declarations, the below line must be first line in the file
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING, Any

import numpy as np

from jclass_interface.carrier import CompactWindow
from jclass_interface.exceptions import JClassLabError
from lp_grid_impl.lp_function import LpFunction
from lp_grid_impl.translation import ProductRangeError, scale_in_log_domain

if TYPE_CHECKING:
    from jclass_interface.arrays import FloatArray, IndexArray
    from lp_grid_impl.translation import WeightedTranslation

logger = logging.getLogger(__name__)

# Relative agreement required between the closed-form and repeated-apply norms
VERIFY_RTOL = 1e-6
VERIFY_ATOL_SCALE = 1e-12

# Above this power the repeated-apply path is not attempted
REPEATED_PATH_LIMIT = 5000


class WitnessKind(StrEnum):
    """Which construction produced a certificate."""

    ZERO = "zero"
    JVECTOR = "jvector"
    TORSION = "torsion"


class WitnessConstructionError(JClassLabError):
    """Raised when no power within the search bound satisfies a builder's thresholds."""

    def __init__(
        self,
        message: str,
        builder: WitnessKind,
        best_n: int | None = None,
        best_sup: float | None = None,
        best_residual: float | None = None,
    ) -> None:
        """Keep the best achieved bounds for reporting."""
        super().__init__(message)
        self.builder = builder
        self.best_n = best_n
        self.best_sup = best_sup
        self.best_residual = best_residual


@dataclass(frozen=True)
class WitnessCertificate:
    """A concrete (g, n) pair approximating base_point by g and target by T^n g."""

    builder: WitnessKind
    base_point: LpFunction
    target: LpFunction
    n: int
    g: LpFunction
    norm_base: float
    norm_image: float
    epsilon: float
    exceptional: CompactWindow = field(default_factory=CompactWindow.empty)
    notes: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        """Return True when both stored norms are below ε."""
        return self.norm_base < self.epsilon and self.norm_image < self.epsilon

    def to_record(self, verification: VerificationResult | None = None) -> dict[str, Any]:
        """Return the flat CSV row.

        With a verification result, valid and repeated_path_skipped come from it; the flag marks a
        repeated-apply path that overflowed or was too long to run. Without one, valid is the stored-norm
        check and the flag is left empty.
        """
        return {
            "builder": str(self.builder),
            "n": self.n,
            "epsilon": self.epsilon,
            "norm_base": self.norm_base,
            "norm_image": self.norm_image,
            "valid": self.valid if verification is None else verification.valid,
            "repeated_path_skipped": None if verification is None else verification.repeated_path_skipped,
        }


# ---------------------------------------------------------------------------
# Shared pieces
# ---------------------------------------------------------------------------


def _require_line(operator: WeightedTranslation, builder: WitnessKind) -> None:
    if operator.carrier.is_finite:
        msg = f"{builder} witness needs a line carrier, got {operator.carrier}"
        raise WitnessConstructionError(msg, builder)
    if not operator.carrier.passes_through_compacts(operator.a):
        msg = f"{builder} witness needs an element that passes through compact sets, got a = {operator.a.index}"
        raise WitnessConstructionError(msg, builder)


def _require_search(epsilon: float, n_max: int, builder: WitnessKind) -> None:
    if not epsilon > 0 or n_max < 1:
        msg = f"{builder} witness needs ε > 0 and n_max >= 1, got ε={epsilon} n_max={n_max}"
        raise WitnessConstructionError(msg, builder)


def _shifted_part(operator: WeightedTranslation, f: LpFunction, keep: IndexArray, log_tilde: FloatArray, n: int) -> LpFunction:
    """Return g with g(k) = ω̃_n(k + n a) (f χ_E)(k + n a), where keep lists E."""
    if not len(keep):
        return LpFunction.zeros(operator.carrier, operator.p)
    values = scale_in_log_domain(f.values_at(keep), log_tilde, keep)
    points = dict(zip((keep - operator.a.power(n)).tolist(), values.tolist(), strict=True))
    return LpFunction.from_mapping(operator.carrier, operator.p, points)


def _image_norm(operator: WeightedTranslation, g: LpFunction, target: LpFunction, n: int) -> float:
    try:
        return operator.iterate(g, n).distance(target)
    except ProductRangeError:
        logger.warning("T^%d g left the floating-point range", n)
        return math.inf


def _best(
    residual: FloatArray, achieved: FloatArray, candidates: IndexArray
) -> tuple[int | None, float | None, float | None]:
    if not len(candidates):
        return None, None, None
    order = np.lexsort((candidates, achieved[candidates], residual[candidates]))
    n = int(candidates[order[0]])
    return n, math.exp(min(float(achieved[n]), 700.0)), float(residual[n])


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def build_witness_zero(operator: WeightedTranslation, f: LpFunction, epsilon: float, n_max: int) -> WitnessCertificate:
    """Build g close to 0 with T^n g close to f.

    E is the set of support cells where ω̃_n < ε/‖f‖_p; n is accepted when the support outside E has
    mass below ε^p/‖f‖_∞^p and n is at least the separation bound of σ(f). Then ‖g‖_p < ε and
    ‖T^n g - f‖_p < ε.

    Raises:
        WitnessConstructionError: If the operator or f is unsuitable, or no n <= n_max qualifies.

    """
    builder = WitnessKind.ZERO
    _require_line(operator, builder)
    _require_search(epsilon, n_max, builder)
    support = f.support()
    if support.is_empty:
        msg = "zero witness needs a nonzero target"
        raise WitnessConstructionError(msg, builder)

    norm_p, norm_inf = f.p_norm(), f.ess_sup()
    log_bound = math.log(epsilon / norm_p)
    mass_bound = epsilon**operator.p / norm_inf**operator.p
    start = operator.carrier.separation_bound(support, operator.a) or 1

    idx = support.indices()
    table = operator.products.tilde_table(idx, n_max)
    below = table < log_bound
    residual = operator.carrier.cell_masses(idx) @ (~below).astype(np.float64)
    achieved = np.where(below, table, -np.inf).max(axis=0)
    columns = np.arange(n_max + 1)
    hits = np.flatnonzero((columns >= start) & (residual < mass_bound))
    if not len(hits):
        best_n, best_sup, best_res = _best(residual, table.max(axis=0), columns[start:])
        msg = f"no n in [{start}, {n_max}] brings ω̃_n below {epsilon / norm_p:.3g} off a set of mass {mass_bound:.3g}"
        raise WitnessConstructionError(msg, builder, best_n, best_sup, best_res)

    n = int(hits[0])
    keep = idx[below[:, n]]
    g = _shifted_part(operator, f, keep, table[below[:, n], n], n)
    zero = LpFunction.zeros(operator.carrier, operator.p)
    cert = WitnessCertificate(
        builder=builder,
        base_point=zero,
        target=f,
        n=n,
        g=g,
        norm_base=g.p_norm(),
        norm_image=_image_norm(operator, g, f, n),
        epsilon=epsilon,
        exceptional=CompactWindow.from_indices(keep.tolist()),
        notes=(f"ω̃ threshold ε/‖f‖_p = {epsilon / norm_p:.6g}", f"residual mass threshold ε^p/‖f‖_∞^p = {mass_bound:.6g}"),
    )
    logger.info("Zero witness: n=%d max ω̃=%.3g ‖g‖=%.3g ‖T^n g - f‖=%.3g", n, math.exp(achieved[n]), cert.norm_base, cert.norm_image)
    return cert


def build_witness_jvector(
    operator: WeightedTranslation,
    f: LpFunction,
    k_window: CompactWindow,
    epsilon: float,
    n_max: int,
) -> WitnessCertificate:
    """Build g close to χ_K with T^n g close to f.

    Both thresholds of the zero witness are halved, and in addition max_K ω_n < ε/(2 λ(K)^{1/p}) so that
    ‖T^n χ_K‖_p < ε/2. n must be at least the separation bound of the hull of σ(f) ∪ K. f = 0 is allowed;
    only the K-side bound then matters.

    Raises:
        WitnessConstructionError: If the operator or K is unsuitable, or no n <= n_max qualifies.

    """
    builder = WitnessKind.JVECTOR
    _require_line(operator, builder)
    _require_search(epsilon, n_max, builder)
    if k_window.is_empty:
        msg = "jvector witness needs a nonempty K"
        raise WitnessConstructionError(msg, builder)

    carrier, p = operator.carrier, operator.p
    support = f.support()
    chi_k = LpFunction.indicator(carrier, p, k_window)
    start = carrier.separation_bound(support.union(k_window).hull(), operator.a) or 1
    columns = np.arange(n_max + 1)

    # ‖T^n χ_K‖_p <= max_K ω_n · λ(K)^{1/p}, so this bound keeps the K side below ε/2
    k_bound = epsilon / (2 * carrier.measure(k_window) ** (1 / p))
    k_side = operator.products.forward_table(k_window.indices(), n_max).max(axis=0)
    ok = (columns >= start) & (k_side < math.log(k_bound))
    notes = [
        "ε split in halves so that ‖T^n g - f‖_p < ε holds for the final norm",
        f"K-side threshold ε/(2 λ(K)^(1/p)) = {k_bound:.6g}",
    ]

    if support.is_empty:
        idx = np.zeros(0, dtype=np.int64)
        below = np.zeros((0, n_max + 1), dtype=bool)
        table = np.zeros((0, n_max + 1), dtype=np.float64)
        residual = np.zeros(n_max + 1, dtype=np.float64)
    else:
        norm_p, norm_inf = f.p_norm(), f.ess_sup()
        idx = support.indices()
        table = operator.products.tilde_table(idx, n_max)
        # the other half of ε goes to the support side: shifted part plus the mass left outside E
        below = table < math.log(epsilon / (2 * norm_p))
        residual = carrier.cell_masses(idx) @ (~below).astype(np.float64)
        mass_bound = (epsilon / 2) ** p / norm_inf**p
        ok &= residual < mass_bound
        notes.append(f"ω̃ threshold ε/(2‖f‖_p) = {epsilon / (2 * norm_p):.6g}; residual mass threshold {mass_bound:.6g}")

    hits = np.flatnonzero(ok)
    if not len(hits):
        best_n, best_sup, best_res = _best(residual, k_side, columns[start:])
        msg = f"no n in [{start}, {n_max}] meets both the support and the K-side bounds (K-side needs < {k_bound:.3g})"
        raise WitnessConstructionError(msg, builder, best_n, best_sup, best_res)

    n = int(hits[0])
    keep = idx[below[:, n]]
    shifted = _shifted_part(operator, f, keep, table[below[:, n], n], n)
    # T^n moves the shifted part back onto f; χ_K itself is carried to a tail of size < ε/2
    g = shifted.add(chi_k)
    cert = WitnessCertificate(
        builder=builder,
        base_point=chi_k,
        target=f,
        n=n,
        g=g,
        norm_base=g.distance(chi_k),
        norm_image=_image_norm(operator, g, f, n),
        epsilon=epsilon,
        exceptional=CompactWindow.from_indices(keep.tolist()),
        notes=tuple(notes),
    )
    logger.info("J-vector witness for K=%s: n=%d ‖g - χ_K‖=%.3g ‖T^n g - f‖=%.3g", k_window, n, cert.norm_base, cert.norm_image)
    return cert


def build_witness_torsion(
    operator: WeightedTranslation,
    g_target: LpFunction,
    epsilon: float,
    delta: float,
    n_max: int,
) -> WitnessCertificate:
    """Build h close to 0 with T^{γn} h close to g_target on a finite cyclic carrier.

    F = σ(g_target) and E is the set of cells of F where ω_{γn}^{-1} < ε/‖g‖_p. n is accepted when F ∖ E
    has measure below δ and ‖g χ_{F∖E}‖_p < ε. The certificate stores the full-cycle power γn.

    Raises:
        WitnessConstructionError: If the carrier is not finite, g_target is zero, or no n <= n_max qualifies.

    """
    builder = WitnessKind.TORSION
    gamma = operator.torsion_order
    if not operator.carrier.is_finite or gamma is None:
        msg = f"torsion witness needs a finite cyclic carrier, got {operator.carrier}"
        raise WitnessConstructionError(msg, builder)
    _require_search(epsilon, n_max, builder)
    support = g_target.support()
    if support.is_empty:
        msg = "torsion witness needs a nonzero target"
        raise WitnessConstructionError(msg, builder)

    carrier, p = operator.carrier, operator.p
    norm_p = g_target.p_norm()
    idx = support.indices()
    masses = carrier.cell_masses(idx)
    weight_p = masses * np.abs(g_target.values_at(idx)) ** p
    # only full cycles m = γn return every cell to itself; column n of logs is the power γn
    logs = -operator.products.forward_table(idx, gamma * n_max)[:, :: gamma]
    below = logs < math.log(epsilon / norm_p)
    residual = masses @ (~below).astype(np.float64)
    residual_norm = (weight_p @ (~below).astype(np.float64)) ** (1 / p)
    columns = np.arange(n_max + 1)
    hits = np.flatnonzero((columns >= 1) & (residual < delta) & (residual_norm < epsilon))
    if not len(hits):
        best_n, best_sup, best_res = _best(residual, logs.max(axis=0), columns[1:])
        best_m = None if best_n is None else gamma * best_n
        msg = f"no full cycle γn <= {gamma * n_max} pushes ω_(γn)^-1 below {epsilon / norm_p:.3g} off a set of mass {delta:.3g}"
        raise WitnessConstructionError(msg, builder, best_m, best_sup, best_res)

    n = int(hits[0])
    m = gamma * n
    keep = idx[below[:, n]]
    h = operator.inverse_iterate(g_target.restrict(CompactWindow.from_indices(keep.tolist())), m)
    cert = WitnessCertificate(
        builder=builder,
        base_point=LpFunction.zeros(carrier, p),
        target=g_target,
        n=m,
        g=h,
        norm_base=h.p_norm(),
        norm_image=_image_norm(operator, h, g_target, m),
        epsilon=epsilon,
        exceptional=CompactWindow.from_indices(keep.tolist()),
        notes=(f"γ={gamma}, cycles n={n}", f"ω_(γn)^-1 threshold ε/‖g‖_p = {epsilon / norm_p:.6g}"),
    )
    logger.info("Torsion witness: γn=%d ‖h‖=%.3g ‖T^(γn) h - g‖=%.3g", m, cert.norm_base, cert.norm_image)
    return cert


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationResult:
    """Recomputed norms of a certificate along both evaluation paths."""

    valid: bool
    norm_base: float
    norm_image_closed_form: float
    norm_image_repeated: float | None
    repeated_path_skipped: bool
    paths_agree: bool
    reason: str = ""


def verify_certificate(cert: WitnessCertificate, operator: WeightedTranslation) -> VerificationResult:
    """Recompute ‖g - base_point‖_p and ‖T^n g - target‖_p from scratch.

    T^n g is evaluated by the closed-form product and, for n <= 5000, again by n successive applications.
    The repeated path is skipped and flagged when it overflows.
    """
    norm_base = cert.g.distance(cert.base_point)
    closed = _image_norm(operator, cert.g, cert.target, cert.n)
    repeated: float | None = None
    skipped = cert.n > REPEATED_PATH_LIMIT
    if not skipped:
        try:
            repeated = operator.apply_repeatedly(cert.g, cert.n).distance(cert.target)
        except ProductRangeError as e:
            logger.warning("Repeated-apply path overflowed for n=%d, using the closed form only: %s", cert.n, e)
            skipped = True
    agree = True
    if repeated is not None:
        floor = VERIFY_ATOL_SCALE * max(1.0, cert.target.p_norm())
        agree = math.isclose(closed, repeated, rel_tol=VERIFY_RTOL, abs_tol=floor)
    reasons = []
    if not norm_base < cert.epsilon:
        reasons.append(f"‖g - base‖ = {norm_base:.3g} is not below ε")
    if not closed < cert.epsilon:
        reasons.append(f"‖T^n g - target‖ = {closed:.3g} is not below ε")
    if not agree:
        reasons.append(f"closed form {closed:.6g} and repeated {repeated:.6g} disagree")
    result = VerificationResult(
        valid=not reasons,
        norm_base=norm_base,
        norm_image_closed_form=closed,
        norm_image_repeated=repeated,
        repeated_path_skipped=skipped,
        paths_agree=agree,
        reason="; ".join(reasons),
    )
    logger.info("Verified %s certificate n=%d: %s", cert.builder, cert.n, "VALID" if result.valid else result.reason)
    return result


def verify(cert: WitnessCertificate, operator: WeightedTranslation) -> bool:
    """Return True when the certificate passes verify_certificate."""
    return verify_certificate(cert, operator).valid
