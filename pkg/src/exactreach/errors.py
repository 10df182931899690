"""Exception hierarchy shared by all modules."""


class ExactReachError(Exception):
    """Base class for every error raised by this package."""


class ModelError(ExactReachError, ValueError):
    """A model violates a well-formedness rule.

    ``line`` is filled in when the model came from a file.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DistributionNotStochasticError(ModelError):
    pass


class EmptyEnabledSetError(ModelError):
    pass


class DanglingTargetError(ModelError):
    pass


class ModelSyntaxError(ModelError):
    def __init__(self, message, line, column):
        self.column = column
        super().__init__(f"column {column}: {message}", line=line)


class IncompleteSchedulerError(ExactReachError):
    pass


class SchedulerDomainMismatchError(ExactReachError):
    pass


class EmptyMaybeSetError(ExactReachError):
    pass


class SingularBasisError(ExactReachError):
    pass


class NonFiniteValueError(ExactReachError, ArithmeticError):
    pass


class NonConvergenceError(ExactReachError):
    pass


class TooManySchedulersError(ExactReachError):
    pass


class NonAptStartError(ExactReachError):
    pass
