"""Public exports for the grid implementation package."""

from lp_grid_impl.carriers import FiniteCyclic as FiniteCyclic
from lp_grid_impl.carriers import IntegerLine as IntegerLine
from lp_grid_impl.carriers import PositiveRealsLogGrid as PositiveRealsLogGrid
from lp_grid_impl.carriers import RealLineGrid as RealLineGrid
from lp_grid_impl.carriers import get_carrier as get_carrier
from lp_grid_impl.lp_function import LpFunction as LpFunction
from lp_grid_impl.translation import ProductRangeError as ProductRangeError
from lp_grid_impl.translation import WeightedTranslation as WeightedTranslation
from lp_grid_impl.translation import WeightProducts as WeightProducts
from lp_grid_impl.weights import ConstantWeight as ConstantWeight
from lp_grid_impl.weights import ExponentialWeight as ExponentialWeight
from lp_grid_impl.weights import LogTableWeight as LogTableWeight
from lp_grid_impl.weights import PiecewiseLinearWeight as PiecewiseLinearWeight
from lp_grid_impl.weights import Segment as Segment
