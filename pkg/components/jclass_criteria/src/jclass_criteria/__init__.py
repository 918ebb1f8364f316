"""Public exports for the condition checkers and witness builders."""

from jclass_criteria.criteria import DecayRow as DecayRow
from jclass_criteria.criteria import TorsionRow as TorsionRow
from jclass_criteria.criteria import check_power_bounded_torsion as check_power_bounded_torsion
from jclass_criteria.criteria import check_sufficient_pair as check_sufficient_pair
from jclass_criteria.criteria import check_tilde_decay as check_tilde_decay
from jclass_criteria.criteria import check_torsion_condition as check_torsion_condition
from jclass_criteria.criteria import classify as classify
from jclass_criteria.criteria import decay_profile as decay_profile
from jclass_criteria.criteria import default_delta as default_delta
from jclass_criteria.criteria import torsion_profile as torsion_profile
from jclass_criteria.reports import Classification as Classification
from jclass_criteria.reports import ConditionId as ConditionId
from jclass_criteria.reports import ConditionReport as ConditionReport
from jclass_criteria.reports import ReportVerdict as ReportVerdict
from jclass_criteria.reports import Verdict as Verdict
from jclass_criteria.reports import WindowWitness as WindowWitness
from jclass_criteria.witness import VerificationResult as VerificationResult
from jclass_criteria.witness import WitnessCertificate as WitnessCertificate
from jclass_criteria.witness import WitnessConstructionError as WitnessConstructionError
from jclass_criteria.witness import WitnessKind as WitnessKind
from jclass_criteria.witness import build_witness_jvector as build_witness_jvector
from jclass_criteria.witness import build_witness_torsion as build_witness_torsion
from jclass_criteria.witness import build_witness_zero as build_witness_zero
from jclass_criteria.witness import verify as verify
from jclass_criteria.witness import verify_certificate as verify_certificate
