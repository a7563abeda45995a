"""Exception types raised by the library."""


class SwstabError(Exception):
    """Base class for all errors raised by this package."""


class NotHurwitz(SwstabError):
    """A matrix required to be Hurwitz (tr < 0, det > 0) is not."""


class TraceZero(SwstabError):
    """An invariant formula divides by a matrix trace that vanishes."""


class DomainError(SwstabError):
    """A transcendental-function argument left its admissible domain.

    Carries the offending value so callers can log the instance instead of
    silently clamping.
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class PreconditionError(SwstabError):
    """An operation was called outside the case where it is defined."""


class WrongCase(PreconditionError):
    """A certificate constructor was called for the wrong stability case."""


class SingularA2(SwstabError):
    """The second matrix is singular and cannot be inverted."""


class DegenerateBasis(SwstabError):
    """Normal-form reduction hit a numerically invalid square root / basis.

    Carries the offending quantity in ``value``.
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class DeltaNonPositive(SwstabError):
    """The parallel set requires a positive discriminant of the pair."""


class NoCrossing(SwstabError):
    """A flow arc failed to reach its target line within the time bound.

    Signals misclassification or numerical failure; never swallowed.
    """


class WitnessNotFound(SwstabError):
    """The numeric Lyapunov-witness search exhausted its budget."""

    def __init__(self, message, budget=None):
        super().__init__(message)
        self.budget = budget
