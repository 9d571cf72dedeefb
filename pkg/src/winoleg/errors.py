"""Exception types shared across the package."""


class InvalidPointsError(ValueError):
    """Raised when an interpolation point set is unusable (duplicates, unparseable)."""


class DimensionError(ValueError):
    """Raised when array shapes or point counts do not match the requested geometry."""
