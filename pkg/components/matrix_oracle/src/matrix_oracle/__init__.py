"""Public exports for the matrix oracle."""

from matrix_oracle.oracle import CyclicMatrix as CyclicMatrix
from matrix_oracle.oracle import InverseNormReport as InverseNormReport
from matrix_oracle.oracle import OracleConsistencyError as OracleConsistencyError
from matrix_oracle.oracle import inverse_power_norms as inverse_power_norms
from matrix_oracle.oracle import inverse_power_report as inverse_power_report
from matrix_oracle.oracle import j_zero_full_space as j_zero_full_space
from matrix_oracle.oracle import reflect as reflect
from matrix_oracle.oracle import to_matrix as to_matrix
from matrix_oracle.oracle import vector_membership as vector_membership
from matrix_oracle.trials import TRIAL_FIELDS as TRIAL_FIELDS
from matrix_oracle.trials import TrialResult as TrialResult
from matrix_oracle.trials import TrialSettings as TrialSettings
from matrix_oracle.trials import disagreements as disagreements
from matrix_oracle.trials import random_operator as random_operator
from matrix_oracle.trials import run_trial as run_trial
from matrix_oracle.trials import run_trials as run_trials
