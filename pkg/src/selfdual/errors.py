"""Exception hierarchy shared by every module of the package."""


class SelfDualError(Exception):
    """Base class for all errors raised by :mod:`selfdual`."""


class DegenerateInput(SelfDualError):
    """Coincident points/lines or another configuration with no well-defined answer."""


class NotCollinear(SelfDualError):
    pass


class IllConditioned(SelfDualError):
    """A least-squares fit whose solution is not unique (or not trustworthy)."""


class DegenerateForm(SelfDualError):
    pass


class GenericityViolation(SelfDualError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class MethodDisagreement(SelfDualError):
    """The map-fitting and cross-ratio tests gave clearly different verdicts."""


class ConventionMismatch(SelfDualError):
    pass


class ChartViolation(SelfDualError):
    pass


class InvalidStar(SelfDualError):
    pass


class ClosureDegenerate(SelfDualError):
    pass


class ClosureNotFound(SelfDualError):
    pass


class DegenerateChoice(SelfDualError):
    pass


class InternalError(SelfDualError):
    pass


class NotInscribed(SelfDualError):
    pass


class InvalidBase(SelfDualError):
    pass


class InvalidWitness(SelfDualError):
    pass


class Ambiguous(SelfDualError):
    pass


class TooLarge(SelfDualError):
    pass


class SingularSample(SelfDualError):
    pass


class TanSingularity(SelfDualError):
    pass


class ClosureFailure(SelfDualError):
    pass


class NotConvexSeed(SelfDualError):
    pass


class IncompatibleSeed(SelfDualError):
    pass


class InvalidParameters(SelfDualError):
    """Generator parameters violating a family invariant."""
