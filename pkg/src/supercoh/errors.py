"""Exception types raised across the package."""


class SupercohError(Exception):
    """Base class for all package errors."""


class DivisionByZero(SupercohError, ZeroDivisionError):
    pass


class FieldMismatch(SupercohError, TypeError):
    pass


class NotFaithful(SupercohError, ValueError):
    """The mu parameters are linearly dependent over the prime field."""


class UnknownGenerator(SupercohError, KeyError):
    pass


class HeightTooLarge(SupercohError, ValueError):
    pass


class NoCoproduct(SupercohError, ValueError):
    pass


class DimensionNotDivisible(SupercohError, ValueError):
    pass


class NotEquivariant(SupercohError, ValueError):
    pass


class NotInvariant(SupercohError, ValueError):
    pass


class DecompositionFailed(SupercohError, RuntimeError):
    pass


class NotLocal(SupercohError, ValueError):
    pass


class LiftingFailed(SupercohError, RuntimeError):
    pass


class NotAlgebraMap(SupercohError, ValueError):
    pass


class RelationFailed(SupercohError, AssertionError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
