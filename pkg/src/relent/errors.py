"""Exception classes.

Validation failures derive from ``ValueError`` so callers that only care
about "bad input" can catch that.
"""


class RelentError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(RelentError, ValueError):
    pass


class EmptySet(ValidationError):
    pass


class DuplicateLabel(ValidationError):
    pass


class NegativeWeight(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class NotStochastic(ValidationError):
    pass


class DomainMismatch(ValidationError):
    pass


class CoefficientOutOfRange(ValidationError):
    pass


class SpaceMismatch(ValidationError):
    pass


class ObjectMismatch(ValidationError):
    pass


class NotMeasurePreserving(ValidationError):
    equation = "f ∘ q = r"


class NotASection(ValidationError):
    equation = "f ∘ s = 1_Y"

    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class FiberSupportViolation(NotASection):
    def __init__(self, msg, x=None, y=None):
        super().__init__(msg, pair=None)
        self.x = x
        self.y = y


class NotSurjective(NotASection):
    pass


class FiberPolicyError(ValidationError):
    pass


class ArityMismatch(ValidationError):
    pass


class AlphaTooLarge(ValidationError):
    pass


class PreconditionError(ValidationError):
    pass


class FamilyShapeChanged(ValidationError):
    pass


class ParseError(RelentError):
    pass
