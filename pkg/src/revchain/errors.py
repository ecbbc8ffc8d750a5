"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Vectors or matrices whose state counts disagree."""


class NotReversibleError(ValueError):
    """Detailed balance is violated beyond the permitted tolerance."""


class NonUniqueStationaryError(ValueError):
    """The kernel has more than one stationary distribution."""


class NotVarianceBoundingError(ValueError):
    """The right spectral gap is (numerically) zero, so Var(P, h) may be infinite."""


class ConsistencyError(RuntimeError):
    """Two routes to the same quantity disagree; indicates a bug or a broken input."""


class SizeError(ValueError):
    """Problem too large for exact enumeration."""


class ChainSpecError(ValueError):
    """A chain description file is malformed or invalid."""
