"""Exception types raised across the package."""


class DyadicError(ValueError):
    """Base class for all domain errors."""


class EqualPoints(DyadicError):
    """Raised when an operation needs two distinct points."""


class WindowTooSmall(DyadicError):
    """A Haar support interval does not fit inside the requested window."""


class GridTooCoarse(DyadicError):
    """The sampling grid cannot resolve the finest Haar function."""


class InvalidOrder(DyadicError):
    """Fractional order outside the open interval (0, 1)."""


class SupportsNotSeparated(DyadicError):
    """The supports of the two pairing arguments meet."""


class InvalidP(DyadicError):
    """Lebesgue exponent outside the admissible range."""


class UnknownSuite(DyadicError):
    """No verification suite with that name."""
