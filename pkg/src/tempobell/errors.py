"""Exception hierarchy shared by every module."""


class TempoBellError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(TempoBellError, ValueError):
    """Raised for malformed inputs (non-finite angles, dim mismatch, bad tags)."""


class UnsupportedDimensionError(TempoBellError, ValueError):
    """Raised when a register would exceed three qubits."""


class NullHistoryError(TempoBellError, ValueError):
    """Raised when a product history has orthogonal time slices and cannot be normalized."""
