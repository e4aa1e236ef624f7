"""Exception types shared across the package."""


class GanqecError(Exception):
    """Base class for all package errors."""


class InvalidDistance(GanqecError):
    """Code distance is not an odd integer >= 3."""


class SizeMismatch(GanqecError):
    """A bit-set does not match the layout it is used with."""


class ShapeMismatch(GanqecError):
    """Tensor or parameter shapes are inconsistent."""


class OddDefectCount(GanqecError):
    """A syndrome with an odd number of defects reached the matcher."""


class DistanceTooLarge(GanqecError):
    """Exhaustive enumeration requested for a distance it cannot cover."""


class SchemaMismatch(GanqecError):
    """A weight file does not follow the declared network schema."""


class NoCrossing(GanqecError):
    """Fidelity curves do not intersect on the sampled grid."""
