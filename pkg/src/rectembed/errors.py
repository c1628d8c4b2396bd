"""Exception hierarchy shared across the package."""


class RectEmbedError(Exception):
    """Base class for all package errors."""


class ValidationError(RectEmbedError, ValueError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DimensionError(RectEmbedError, ValueError):
    pass


class CapacityError(RectEmbedError):
    pass


class InfeasibleError(RectEmbedError):
    """Raised when an inequality system fails; carries the violating (j, l) pairs."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class FoldInfeasibleError(RectEmbedError):
    pass


class ConstructionError(RectEmbedError):
    pass


class CertificationError(RectEmbedError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InvariantViolation(RectEmbedError):
    pass


class DomainError(RectEmbedError, ValueError):
    pass


class SeamError(RectEmbedError):
    pass


class GridError(RectEmbedError, ValueError):
    pass


class NotACycleError(RectEmbedError):
    pass


class TightenError(RectEmbedError):
    def __init__(self, message, face=None, dimension=None):
        super().__init__(message)
        self.face = face
        self.dimension = dimension
