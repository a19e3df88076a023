"""Exception types shared across the library."""


class FrogprError(Exception):
    """Base class for all library-specific errors."""


class SingularConfigurationError(FrogprError):
    """Three-circle system is degenerate (centers effectively collinear)."""


class NoSolutionError(FrogprError):
    """A circle system has no common point within tolerance."""


class DegenerateSignalError(FrogprError):
    """Input violates the genericity hypotheses (a needed coefficient is ~0)."""


class InconsistentMeasurementsError(FrogprError):
    """Measurements admit no signal consistent within tolerance."""
