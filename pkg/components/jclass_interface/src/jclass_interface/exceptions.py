"""Shared exceptions for the J-class laboratory."""


class JClassLabError(Exception):
    """Base exception for all laboratory errors."""


class CarrierMismatchError(JClassLabError):
    """Raised when two operands live on different carriers or exponents."""


class EmptyWindowError(JClassLabError):
    """Raised when an operation needs a window of positive measure."""


class WeightDomainError(JClassLabError):
    """Raised when a weight is undefined, ambiguous or non-positive at a grid point."""


class GridAlignmentError(JClassLabError):
    """Raised when a native coordinate does not sit on the carrier grid."""
