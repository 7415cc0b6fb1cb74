"""Exception hierarchy for voronoicells

Every error raised deliberately by the library derives from VoronoiCellsError,
so that the CLI can turn them into a one-line diagnostic and exit status 1.

"""


class VoronoiCellsError(Exception):
    """Base class of all library errors"""


class SeriesError(VoronoiCellsError, ValueError):
    """Invalid truncated series operation

    Raised on variable mismatches, division by a series without an invertible
    leading term, and coefficient requests outside the retained window.

    """


class DomainError(VoronoiCellsError, ValueError):
    """An argument lies outside the domain of an operation"""


class ConvergenceError(VoronoiCellsError):
    """A fixed point, quadrature, extrapolation or cross-check failed"""


class PrecisionError(VoronoiCellsError):
    """Working precision was exhausted by cancellation"""


class ConfigError(VoronoiCellsError):
    """Invalid configuration from flags or the environment"""
