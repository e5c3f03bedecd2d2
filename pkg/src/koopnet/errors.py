"""Exception types shared across the package."""


class KoopnetError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(KoopnetError, ValueError):
    """A parameter set violates a model invariant."""


class DomainError(KoopnetError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateDataError(KoopnetError, ValueError):
    """Input data carries no usable signal (e.g. all singular values ~ 0)."""


class InsufficientDataError(KoopnetError, ValueError):
    """Not enough data rows/windows to run the requested analysis."""


class NotFoundError(KoopnetError, LookupError):
    """A requested spectral feature is absent from the decomposition."""
