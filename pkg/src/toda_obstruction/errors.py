"""Exception hierarchy shared by every module."""


class ArtifactError(Exception):
    """Base class for all errors raised by this package."""


class InvalidPrimeError(ArtifactError, ValueError):
    pass


class DomainError(ArtifactError, ValueError):
    """An argument lies outside the range an operation is defined on."""


class PreconditionError(ArtifactError):
    pass


class BoundaryEffectsError(ArtifactError):
    """A window is too small for the differentials to be resolved inside it."""


class RefusalError(ArtifactError):
    """The theorem pipeline declines to claim a verdict (p <= 5)."""


class UsageError(ArtifactError, ValueError):
    pass
