"""Exception types shared across the package."""


class SpectralGapError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SpectralGapError, ValueError):
    """A run configuration or object literal could not be resolved."""


class NumericalError(SpectralGapError, ArithmeticError):
    """A numerical check failed or a matrix contained non-finite entries."""


class ResourceCapError(SpectralGapError, MemoryError):
    """A computation was refused because its memory estimate exceeds the cap.

    ``suggestion`` carries the largest parameter value that fits, when known.
    """

    def __init__(self, message: str, suggestion: int | None = None):
        super().__init__(message)
        self.suggestion = suggestion
