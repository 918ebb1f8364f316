"""jclass-lab command line.

    jclass-lab describe --config PATH
    jclass-lab check    --config PATH [--eps E] [--delta D] [--nmax N]
    jclass-lab witness  --config PATH [--target LO:HI] [--eps E] [--delta D] [--nmax N]
    jclass-lab oracle   [--gamma G] [--trials T] [--seed S] [--nmax N] [--eta H]
    jclass-lab example  {1,2,3} [--alpha A] [--beta B] [--eps E] [--nmax N]

Every command also takes --out DIR and --verbose. JCLASS_OUT overrides --out and JCLASS_LOG_LEVEL sets
the log level when --verbose is absent; both can come from a .env file. Exit status: 0 when a verdict or
a VALID certificate is delivered, 1 for witness or oracle failures, 2 for configuration errors.
"""

# to avoid having to consider forward declarations, the below line must be first line in the file
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import TYPE_CHECKING

from dotenv import find_dotenv, load_dotenv

from jclass_interface.exceptions import JClassLabError
from jclass_lab.commands import (
    EXIT_CONFIG,
    EXIT_FAILURE,
    cmd_check,
    cmd_describe,
    cmd_oracle,
    cmd_witness,
    run_scenario,
)
from jclass_lab.config import build_lab, load_scenario, parse_oracle_options
from jclass_lab.exceptions import ConfigError, OracleDisagreementError
from jclass_lab.worked_examples import EXAMPLE_IDS, builtin_scenario
from matrix_oracle.oracle import OracleConsistencyError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from jclass_lab.commands import CommandReport
    from jclass_lab.config import Interval, Scenario

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
OUT_ENV = "JCLASS_OUT"
LOG_LEVEL_ENV = "JCLASS_LOG_LEVEL"


def _load_environment() -> None:
    env_path = Path(__file__).parent / ".env"
    if env_path.exists():
        load_dotenv(dotenv_path=env_path)
    else:
        load_dotenv(find_dotenv(usecwd=True))


def _configure_logging(*, verbose: bool) -> None:
    name = "DEBUG" if verbose else os.getenv(LOG_LEVEL_ENV, "WARNING").upper()
    level = logging.getLevelNamesMapping().get(name, logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser with one sub-parser per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory for the CSV files (JCLASS_OUT wins over this)")
    common.add_argument("--verbose", action="store_true", help="log at DEBUG level")

    tolerances = argparse.ArgumentParser(add_help=False)
    tolerances.add_argument("--eps", type=float, help="ε: product threshold for check, accuracy for witness and example")
    tolerances.add_argument("--delta", type=float, help="δ: allowed exceptional measure")
    tolerances.add_argument("--nmax", type=int, help="search bound on the power n")

    config = argparse.ArgumentParser(add_help=False)
    config.add_argument("--config", required=True, type=Path, help="TOML scenario file")

    parser = argparse.ArgumentParser(prog="jclass-lab", description="Numerical J-class checks for weighted translations.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("describe", parents=[common, config], help="carrier, torsion order and weight profile")
    sub.add_parser("check", parents=[common, config, tolerances], help="classify the operator")
    witness = sub.add_parser("witness", parents=[common, config, tolerances], help="build a witness certificate")
    witness.add_argument("--target", help="indicator target LO:HI in native coordinates")

    oracle = sub.add_parser("oracle", parents=[common], help="randomized checker/oracle agreement on Z_γ")
    oracle.add_argument("--gamma", type=int, default=4)
    oracle.add_argument("--trials", type=int, default=200)
    oracle.add_argument("--seed", type=int, default=0)
    oracle.add_argument("--nmax", type=int, default=500)
    oracle.add_argument("--eta", type=float, default=1e-3)

    example = sub.add_parser("example", parents=[common, tolerances], help="run a worked example end to end")
    example.add_argument("example_id", type=int, choices=EXAMPLE_IDS)
    example.add_argument("--alpha", type=float, help="example 1 only: weight right of 1 (1 < α < β)")
    example.add_argument("--beta", type=float, help="example 1 only: weight left of -1")
    example.add_argument("--target", help="indicator target LO:HI in native coordinates")
    return parser


def _parse_target(text: str | None) -> Interval | None:
    if text is None:
        return None
    lo, _, hi = text.partition(":")
    try:
        return float(lo), float(hi)
    except ValueError as e:
        raise ConfigError([f"--target: expected LO:HI, got {text!r}"]) from e


def _with_flags(scenario: Scenario, args: argparse.Namespace, *, witness: bool) -> Scenario:
    return scenario.with_overrides(
        epsilon=None if witness else args.eps,
        witness_epsilon=args.eps if witness else None,
        delta=args.delta,
        n_max=args.nmax,
        target=_parse_target(getattr(args, "target", None)),
    )


def _output_dir(args: argparse.Namespace, scenario: Scenario | None = None) -> Path:
    env = os.getenv(OUT_ENV)
    if env:
        return Path(env)
    if args.out:
        return Path(args.out)
    return Path(scenario.output.directory if scenario is not None else "out")


def _dispatch(args: argparse.Namespace) -> CommandReport:
    if args.command == "oracle":
        options = parse_oracle_options(
            {"gamma": args.gamma, "trials": args.trials, "seed": args.seed, "n_max": args.nmax, "eta": args.eta}
        )
        return cmd_oracle(options, _output_dir(args))
    if args.command == "example":
        scenario = _with_flags(builtin_scenario(args.example_id, alpha=args.alpha, beta=args.beta), args, witness=True)
        return run_scenario(scenario, _output_dir(args, scenario))

    scenario = load_scenario(args.config)
    if args.command != "describe":
        scenario = _with_flags(scenario, args, witness=args.command == "witness")
    lab = build_lab(scenario)
    out = _output_dir(args, scenario)
    if args.command == "describe":
        return cmd_describe(lab, out)
    if args.command == "check":
        return cmd_check(lab, out)
    return cmd_witness(lab, out)


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit status."""
    _load_environment()
    args = build_parser().parse_args(argv)
    _configure_logging(verbose=args.verbose)
    try:
        report = _dispatch(args)
    except ConfigError as e:
        for message in e.messages:
            sys.stderr.write(f"error: {message}\n")
        return EXIT_CONFIG
    except (OracleDisagreementError, OracleConsistencyError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_FAILURE
    except JClassLabError:
        logger.exception("Command %s failed", args.command)
        return EXIT_FAILURE

    for line in report.lines:
        sys.stdout.write(f"{line}\n")
    for path in report.files:
        sys.stdout.write(f"wrote {path}\n")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
