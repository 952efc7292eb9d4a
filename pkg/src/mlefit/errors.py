"""Exception hierarchy shared by all modules."""


class MlefitError(Exception):
    """Base class for errors raised by this package."""


class DomainError(MlefitError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(MlefitError, ArithmeticError):
    """A series or iterative procedure failed to meet its stopping rule."""


class NoRootError(ConvergenceError):
    """A bracketed root search found no sign change on its interval."""


class NonConvergenceError(ConvergenceError):
    """An estimator ran out of iterations.

    ``result`` holds the best (unconverged) fit so callers can still report it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
