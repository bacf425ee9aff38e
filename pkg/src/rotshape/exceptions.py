class RotShapeError(Exception):
    """Base class for all toolkit errors."""


class NumericalError(RotShapeError):
    """Errors raised by a numerical contract (grid, sampling, convergence)."""


class TruncationError(NumericalError):
    pass


class DomainError(RotShapeError, ValueError):
    pass


class ConvergenceError(NumericalError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class GridError(NumericalError):
    pass


class NyquistError(NumericalError):
    pass


class WindowError(RotShapeError, ValueError):
    pass


class AssignmentError(RotShapeError):
    pass


class ParseError(RotShapeError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class ValidationError(RotShapeError, ValueError):
    pass
