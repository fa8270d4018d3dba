"""Exception hierarchy.

Every numerical precondition failure derives from :class:`TomographyError`
so callers (and the CLI exit-code mapping) can catch them in one place.
"""


class TomographyError(Exception):
    """Base class for numerical precondition failures."""


class TruncationTooSmall(TomographyError):
    pass


class GridTooSmall(TomographyError):
    pass


class UnsupportedState(TomographyError):
    pass


class DegenerateQuadric(TomographyError):
    pass


class ImagResidualTooLarge(TomographyError):
    pass


class SingularRegionRequested(TomographyError):
    pass


class MissingParameterPoint(TomographyError):
    pass


class NonPhysicalResult(TomographyError):
    pass


class DimensionMismatch(TomographyError):
    pass


class TraceNotDecayed(TomographyError):
    pass


class WindowNotInvertibleAtUnitFrequency(TomographyError):
    pass


class WindowNotInvertible(TomographyError):
    """Raised when the window transform vanishes on the radial quadrature.

    ``offending_r`` lists the radial nodes where it vanishes.
    """

    def __init__(self, message, offending_r=()):
        super().__init__(message)
        self.offending_r = tuple(offending_r)


class ConfigError(ValueError):
    """Invalid pipeline configuration (CLI exit code 2)."""
