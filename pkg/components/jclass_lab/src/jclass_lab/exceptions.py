"""Command-level exceptions for the J-class laboratory CLI."""

from jclass_interface.exceptions import JClassLabError


class ConfigError(JClassLabError):
    """Raised when a scenario or a command-line value fails validation (exit status 2)."""

    def __init__(self, messages: list[str]) -> None:
        """Keep one '<field path>: <reason>' line per failing field."""
        super().__init__("; ".join(messages))
        self.messages = messages


class OracleDisagreementError(JClassLabError):
    """Raised when checker and matrix oracle disagree away from the boundary band (exit status 1)."""

    def __init__(self, seeds: list[int]) -> None:
        """Keep the offending trial seeds."""
        super().__init__("checker and oracle disagree for seeds " + ", ".join(str(s) for s in seeds))
        self.seeds = seeds
