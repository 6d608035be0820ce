"""Exception hierarchy shared across the package."""


class CasimirError(Exception):
    """Base class for all errors raised by casimir_piston."""


class InvalidGeometryError(CasimirError, ValueError):
    """Cross section is degenerate, self-intersecting or badly oriented."""


class DomainError(CasimirError, ValueError):
    """Argument outside the domain of a function."""


class DivergenceError(DomainError):
    """The requested value is infinite (e.g. Li_1 at z = 1)."""


class ResolutionError(CasimirError):
    """Discretization too coarse for the requested number of eigenvalues."""


class ConvergenceError(CasimirError, RuntimeError):
    """An iterative method failed to converge."""


class InsufficientSpectrumError(CasimirError):
    """The spectrum is too short to reach the requested tolerance.

    Attributes
    ----------
    required_count : int
        Estimated multiplicity-weighted mode count that would meet the
        tolerance.
    """

    def __init__(self, message, required_count=None):
        super().__init__(message)
        self.required_count = required_count


class CutoffCoverageError(CasimirError):
    """The longitudinal cutoff ``nx_max`` does not cover the kernel support."""


class ConfigError(CasimirError, ValueError):
    """Malformed or inconsistent run configuration."""


class TruncationError(CasimirError):
    """A series cut at a user-given length has not converged."""
