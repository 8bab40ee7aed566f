"""Exception hierarchy.

Validation problems derive from ``ValueError`` and numerical failures from
``ArithmeticError`` so callers that only know the builtins still catch them.
The command line maps the two families onto distinct exit codes.
"""


class DeltaDeltaError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(DeltaDeltaError, ValueError):
    """Bad input: a parameter, size or configuration value is not allowed."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class InvalidMeshError(ValidationError):
    pass


class MeshIncompatibilityError(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class DimensionError(ValidationError):
    pass


class UnstableParameterError(ValidationError):
    """lambda is (numerically) on the segment [-1, 1]."""

    def __init__(self, lam, distance):
        super().__init__(
            f"lambda={lam!r} is at distance {distance:.3e} from [-1, 1]; "
            "the discrete system is not uniformly stable there",
            field="lambda",
        )
        self.lam = lam
        self.distance = distance


class PoleProximityError(ValidationError):
    pass


class NumericalError(DeltaDeltaError, ArithmeticError):
    """A computation produced a result that cannot be trusted."""


class NumericalSingularityError(NumericalError):
    def __init__(self, pivot):
        super().__init__(f"factorization broke down: pivot magnitude {pivot:.3e}")
        self.pivot = pivot


class ConsistencyCheckError(NumericalError):
    """The error equation (lambda I - T) E = c does not hold to tolerance."""


class DegenerateDataError(NumericalError):
    pass
