"""Exception hierarchy shared by every module."""


class SurfCommitError(Exception):
    """Base class for all library errors."""


class DivisionByZero(SurfCommitError, ZeroDivisionError):
    pass


class FieldMismatch(SurfCommitError, TypeError):
    pass


class CapacityExceeded(SurfCommitError):
    """An enumeration or encoding would exceed its configured budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class Undefined(SurfCommitError, ValueError):
    pass


class InvalidDegree(SurfCommitError, ValueError):
    pass


class InvalidCurve(SurfCommitError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegenerateParameter(SurfCommitError, ValueError):
    pass


class NoSurfaceExists(SurfCommitError):
    pass


class GroebnerBudgetExceeded(SurfCommitError):
    pass


class TheoremHypothesisViolated(SurfCommitError, ValueError):
    pass


class InsufficientData(SurfCommitError):
    def __init__(self, message, constraints=None):
        super().__init__(message)
        self.constraints = constraints or {}


class InconsistentCounts(SurfCommitError):
    pass


class CommitFailed(SurfCommitError):
    def __init__(self, message, reasons=()):
        super().__init__(message)
        self.reasons = list(reasons)


class ParseError(SurfCommitError, ValueError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + loc)
        self.line = line
        self.column = column


class ValidationError(SurfCommitError, ValueError):
    pass


class DegenerateValue(SurfCommitError, ValueError):
    pass


class InvalidInstance(SurfCommitError, ValueError):
    pass
