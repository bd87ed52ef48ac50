"""Exception hierarchy shared by every module of the package."""


class TripletError(Exception):
    """Base class for all package errors."""


class PreconditionError(TripletError, ValueError):
    """An input violates the documented precondition of an operation."""


class NumericalFailure(TripletError, ArithmeticError):
    """A well-formed problem has no (unique) answer at the working precision."""


class NonFinite(PreconditionError):
    pass


class ToleranceOutOfRange(PreconditionError):
    pass


class DimensionMismatch(PreconditionError):
    pass


class KernelComponent(PreconditionError):
    """The vector has a non-negligible component in the numerical kernel."""


class NotHermitian(PreconditionError):
    pass


class NotPositive(PreconditionError):
    pass


class SpaceMismatch(PreconditionError):
    pass


class PointOutsideDisc(PreconditionError):
    pass


class FieldMismatch(PreconditionError):
    pass


class ConditionC4Missing(PreconditionError):
    """The lower-bound function ``c`` is needed but was not supplied."""


class SingularFactor(NumericalFailure):
    pass


class SingularHamiltonian(NumericalFailure):
    pass


class NoSolution(NumericalFailure):
    """The load does not define a functional on the energy space.

    ``direction`` holds the kernel vector on which the load fails to vanish.
    """

    def __init__(self, message, direction=None):
        super().__init__(message)
        self.direction = direction


class DegenerateAtNode(UserWarning):
    """The coefficient vanishes on some cells; the solve runs on the reduced range."""
