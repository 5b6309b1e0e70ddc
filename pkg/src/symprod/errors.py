"""Exception types shared across the toolkit."""


class SymprodError(Exception):
    """Base class for all toolkit errors."""


class EmptyInputError(SymprodError):
    """A point list that must be nonempty was empty."""


class NonFiniteCoordinateError(SymprodError):
    """A coordinate was NaN or infinite."""


class DimensionMismatchError(SymprodError):
    """Operands declare incompatible ambient dimensions."""


class CapacityExceededError(SymprodError):
    """A point set exceeds the declared cardinality capacity."""


class BadRangeError(SymprodError):
    """An integer parameter lies outside its documented range."""


class NegativeParameterError(SymprodError):
    """A cone parameter t was negative."""


class DiameterViolationError(SymprodError):
    """An underlying space exceeds its diameter contract."""


class DegenerateFamilyError(SymprodError):
    """Two directions of a line family are numerically parallel."""


class NonUnitDirectionError(SymprodError):
    """A direction vector is not unit length."""


class PreconditionError(SymprodError):
    """A documented operation precondition does not hold."""


class DecompositionError(SymprodError):
    """Map decomposition failed validation (numerical degeneracy)."""


class DegenerateSampleError(SymprodError):
    """Random sampling produced no usable pair."""


class InvariantViolationError(SymprodError):
    """A certified bound or report invariant failed on observed data."""


class SchemaError(SymprodError):
    """A JSON document does not match the expected schema."""
