"""Exception hierarchy shared by every module."""


class QchshError(Exception):
    """Base class for all library errors."""


class DimensionError(QchshError, ValueError):
    """Operands have incompatible or invalid shapes."""


class MatrixFormatError(QchshError, ValueError):
    """A serialized matrix document is malformed."""


class PreconditionError(QchshError, ValueError):
    """An input violates a documented precondition (e.g. not Hermitian)."""


class ConvergenceError(QchshError, RuntimeError):
    """An iterative algorithm did not converge."""


class InternalInvariantError(QchshError, AssertionError):
    """A post-condition that should hold by construction was violated."""


class NotPositiveError(PreconditionError):
    """Matrix is not positive semidefinite."""


class TraceError(PreconditionError):
    """Matrix does not have unit trace."""


class EnsembleError(PreconditionError):
    """Ensemble weights or vectors are invalid."""


class SeparableError(PreconditionError):
    """Separable decomposition is invalid."""


class ConfigError(PreconditionError):
    """CHSH observables do not satisfy the required conditions."""


class ContextError(PreconditionError):
    """Hypotheses of a requested bound context are not met."""


class ModelError(QchshError, ValueError):
    """A hidden-variable model is malformed."""


class RangeError(QchshError, ValueError):
    """A value lies outside its admissible range."""
