"""Exception types raised by the library."""


class BregmanError(Exception):
    """Base class for library errors."""


class DomainError(BregmanError, ValueError):
    """A point lies outside the (open) domain of a generator or its gradient space."""


class ShapeError(BregmanError, ValueError):
    """Dimensions of inputs do not agree."""


class ConvergenceError(BregmanError, RuntimeError):
    """An iterative routine hit its iteration cap before meeting a tolerance.

    The best iterate found so far is kept on ``best``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
