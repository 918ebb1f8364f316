"""Sub-command implementations.

Each command takes validated inputs, writes its CSV files under the output directory and returns a
CommandReport; printing is left to the entry point.
"""

# to avoid having to consider forward declarations, the below line must be first line in the file
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from jclass_criteria.criteria import classify, default_delta
from jclass_criteria.witness import (
    WitnessConstructionError,
    build_witness_jvector,
    build_witness_torsion,
    build_witness_zero,
    verify_certificate,
)
from jclass_lab import reporting
from jclass_lab.config import build_lab
from jclass_lab.exceptions import OracleDisagreementError
from jclass_lab.worked_examples import builtin_scenario
from matrix_oracle.trials import TRIAL_FIELDS, disagreements, run_trials

if TYPE_CHECKING:
    from pathlib import Path

    from jclass_criteria.reports import Verdict
    from jclass_criteria.witness import VerificationResult, WitnessCertificate
    from jclass_lab.config import Lab, OracleOptions, Scenario

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


@dataclass
class CommandReport:
    """Printable lines, written files and the exit status of one command."""

    lines: list[str] = field(default_factory=list)
    files: list[Path] = field(default_factory=list)
    exit_code: int = EXIT_OK
    verdict: Verdict | None = None
    verification: VerificationResult | None = None

    def add(self, line: str) -> None:
        """Append one output line."""
        self.lines.append(line)

    def merge(self, other: CommandReport) -> None:
        """Append another command's output, keeping the worst exit status."""
        self.lines.extend(other.lines)
        self.files.extend(other.files)
        self.exit_code = max(self.exit_code, other.exit_code)
        self.verdict = other.verdict or self.verdict
        self.verification = other.verification or self.verification


# ---------------------------------------------------------------------------
# describe
# ---------------------------------------------------------------------------


def cmd_describe(lab: Lab, out: Path) -> CommandReport:
    """Print the carrier, torsion order, separation bounds and weight summary; write weight_profile.csv."""
    report = CommandReport()
    carrier, a = lab.carrier, lab.operator.a
    torsion = carrier.torsion_order(a)
    report.add(f"scenario: {lab.scenario.name}")
    report.add(f"carrier: {carrier}")
    report.add(f"operator: {lab.operator}")
    report.add(f"torsion_order: {'none' if torsion is None else torsion}")
    report.add(f"compact-passing: {'yes' if carrier.passes_through_compacts(a) else 'no'}")
    for window in lab.probe_windows:
        bound = carrier.separation_bound(window, a)
        report.add(f"separation_bound on {reporting.native_interval(carrier, window)}: {'none' if bound is None else bound}")
    report.add(f"weight: {lab.operator.weight.describe()}")

    rows = reporting.weight_profile_rows(lab)
    omega = [row["omega"] for row in rows]
    profile = reporting.native_interval(carrier, lab.profile_window())
    report.add(f"omega on {profile}: min {min(omega):.6g}, max {max(omega):.6g}")
    fields = reporting.WEIGHT_PROFILE_FIELDS
    report.files.append(reporting.write_csv(out / reporting.WEIGHT_PROFILE_CSV, fields, rows))
    return report


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def cmd_check(lab: Lab, out: Path) -> CommandReport:
    """Classify the operator and print the supporting reports; write products.csv and orbit_norms.csv.

    An Inconclusive verdict is still a delivered verdict and exits with status 0.
    """
    tolerances = lab.scenario.tolerances
    k_windows = () if lab.k_window is None else (lab.k_window,)
    verdict = classify(
        lab.operator, lab.probe_windows, tolerances.epsilon, tolerances.delta, tolerances.n_max, k_windows=k_windows
    )
    report = CommandReport(verdict=verdict)
    report.add(f"verdict: {reporting.verdict_label(lab.carrier, verdict)}")
    if verdict.indicator_window is not None:
        report.add(f"indicator K (native): {reporting.native_interval(lab.carrier, verdict.indicator_window)}")
    for condition in verdict.supporting_reports:
        report.add(f"  {condition.summary()}")
    for note in (*verdict.notes, *lab.scenario.notes):
        report.add(f"note: {note}")

    report.files.append(
        reporting.write_csv(out / reporting.PRODUCTS_CSV, reporting.products_fields(lab.carrier), reporting.products_rows(lab))
    )
    report.files.append(
        reporting.write_csv(out / reporting.ORBIT_NORMS_CSV, reporting.ORBIT_NORMS_FIELDS, reporting.orbit_rows(lab))
    )
    return report


# ---------------------------------------------------------------------------
# witness
# ---------------------------------------------------------------------------


def build_certificate(lab: Lab) -> WitnessCertificate:
    """Pick the builder that fits the scenario.

    Finite cyclic carriers use the torsion builder; line carriers use the J-vector builder when K is set
    and the zero builder otherwise.
    """
    tolerances = lab.scenario.tolerances
    epsilon, n_max = tolerances.witness_epsilon, tolerances.n_max
    if lab.carrier.is_finite:
        delta = tolerances.delta or default_delta(lab.carrier, lab.target.support())
        return build_witness_torsion(lab.operator, lab.target, epsilon, delta, n_max)
    if lab.k_window is not None:
        return build_witness_jvector(lab.operator, lab.target, lab.k_window, epsilon, n_max)
    return build_witness_zero(lab.operator, lab.target, epsilon, n_max)


def cmd_witness(lab: Lab, out: Path) -> CommandReport:
    """Build, re-verify and serialize a witness certificate; exit 0 iff it is VALID."""
    report = CommandReport()
    try:
        cert = build_certificate(lab)
    except WitnessConstructionError as e:
        report.add(f"witness: FAILED ({e})")
        if e.best_n is not None:
            report.add(f"best achieved: n={e.best_n} sup={e.best_sup} residual={e.best_residual}")
        report.exit_code = EXIT_FAILURE
        return report

    result = verify_certificate(cert, lab.operator)
    report.verification = result
    report.add(f"witness: {'VALID' if result.valid else 'INVALID'}")
    report.add(
        f"builder={cert.builder} n={cert.n} ε={cert.epsilon:g} "
        f"‖g - base‖={result.norm_base:.6g} ‖T^n g - target‖={result.norm_image_closed_form:.6g}"
    )
    if result.repeated_path_skipped:
        report.add("repeated-apply check skipped; closed form only")
    if not result.valid:
        report.add(f"reason: {result.reason}")
    for note in cert.notes:
        report.add(f"note: {note}")
    row = cert.to_record(result)
    report.files.append(reporting.write_csv(out / reporting.WITNESS_CSV, reporting.WITNESS_FIELDS, [row]))
    report.exit_code = EXIT_OK if result.valid else EXIT_FAILURE
    return report


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------


def cmd_oracle(options: OracleOptions, out: Path) -> CommandReport:
    """Run the randomized checker/oracle trials on Z_γ and write oracle_trials.csv.

    Raises:
        OracleDisagreementError: If some trial away from the boundary band disagrees; the CSV is written first.

    """
    results = run_trials(options.to_settings())
    report = CommandReport()
    agreeing = sum(r.agrees for r in results)
    decided = sum(not r.near_boundary for r in results)
    report.add(f"oracle: γ={options.gamma} trials={len(results)} seed={options.seed} N={options.n_max} η={options.eta:g}")
    report.add(f"agreement: {agreeing}/{len(results)} ({decided} away from the boundary band)")
    rows = [r.to_record() for r in results]
    report.files.append(reporting.write_csv(out / reporting.ORACLE_TRIALS_CSV, TRIAL_FIELDS, rows))
    bad = disagreements(results)
    if bad:
        raise OracleDisagreementError([r.seed for r in bad])
    return report


# ---------------------------------------------------------------------------
# example
# ---------------------------------------------------------------------------


def run_scenario(scenario: Scenario, out: Path) -> CommandReport:
    """Run describe, check and witness on one scenario."""
    lab = build_lab(scenario)
    report = cmd_describe(lab, out)
    report.merge(cmd_check(lab, out))
    report.merge(cmd_witness(lab, out))
    return report


def cmd_example(example_id: int, out: Path, *, alpha: float | None = None, beta: float | None = None) -> CommandReport:
    """Run describe, check and the canned witness build on a worked example."""
    scenario = builtin_scenario(example_id, alpha=alpha, beta=beta)
    logger.info("Running worked example %d", example_id)
    return run_scenario(scenario, out)
