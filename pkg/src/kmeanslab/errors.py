"""Exception types shared across the package."""


class KmeansLabError(Exception):
    """Base class for all structured errors raised by this package."""


class DimensionMismatchError(KmeansLabError):
    """Inputs disagree on point count, dimension, or cluster count."""


class EmptyClusterError(KmeansLabError):
    """A center of mass was requested for an empty point set."""


class DegenerateBisectorError(KmeansLabError):
    """The two centers coincide, so their bisector is undefined."""


class InfeasibleInitError(KmeansLabError):
    """The requested initialization cannot produce k centers."""


class InvalidSigmaError(KmeansLabError):
    """A perturbation standard deviation must be strictly positive."""


class WrongDimensionError(KmeansLabError):
    """The operation is only defined for a specific dimension."""


class UnsupportedError(KmeansLabError):
    """The request exceeds an enumeration budget or a certified regime."""


class MissingContextError(KmeansLabError):
    """A bound evaluation is missing a required context field."""

    def __init__(self, field: str, bound: str):
        self.field = field
        self.bound = bound
        super().__init__(f"bound {bound!r} requires context field {field!r}")


class SweepInvariantError(KmeansLabError):
    """A run inside a sweep violated an engine invariant."""
