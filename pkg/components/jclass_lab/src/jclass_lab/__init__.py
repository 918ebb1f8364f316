"""Public exports for the command-line front end."""

from jclass_lab.commands import CommandReport as CommandReport
from jclass_lab.commands import cmd_check as cmd_check
from jclass_lab.commands import cmd_describe as cmd_describe
from jclass_lab.commands import cmd_example as cmd_example
from jclass_lab.commands import cmd_oracle as cmd_oracle
from jclass_lab.commands import cmd_witness as cmd_witness
from jclass_lab.config import Lab as Lab
from jclass_lab.config import Scenario as Scenario
from jclass_lab.config import build_lab as build_lab
from jclass_lab.config import load_scenario as load_scenario
from jclass_lab.exceptions import ConfigError as ConfigError
from jclass_lab.exceptions import OracleDisagreementError as OracleDisagreementError
from jclass_lab.worked_examples import builtin_scenario as builtin_scenario
