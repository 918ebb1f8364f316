"""Public export surface for jclass_interface."""

from jclass_interface.carrier import CarrierKind as CarrierKind
from jclass_interface.carrier import CompactWindow as CompactWindow
from jclass_interface.carrier import GroupCarrier as GroupCarrier
from jclass_interface.carrier import GroupElement as GroupElement
from jclass_interface.exceptions import CarrierMismatchError as CarrierMismatchError
from jclass_interface.exceptions import EmptyWindowError as EmptyWindowError
from jclass_interface.exceptions import GridAlignmentError as GridAlignmentError
from jclass_interface.exceptions import JClassLabError as JClassLabError
from jclass_interface.exceptions import WeightDomainError as WeightDomainError
from jclass_interface.weight import Weight as Weight
from jclass_interface.weight import WeightKind as WeightKind
