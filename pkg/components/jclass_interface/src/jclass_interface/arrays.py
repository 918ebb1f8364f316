"""Array aliases shared by every component."""

from typing import TypeAlias

import numpy as np
from numpy.typing import NDArray

IndexArray: TypeAlias = NDArray[np.int64]  # noqa: UP040
FloatArray: TypeAlias = NDArray[np.float64]  # noqa: UP040
