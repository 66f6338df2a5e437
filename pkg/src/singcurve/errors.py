"""Exception hierarchy shared by every module."""


class SingcurveError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SingcurveError):
    """Bad user input (parse, schema, unsupported curve)."""


class CurveSyntaxError(InputError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class UnknownVariable(CurveSyntaxError):
    pass


class NonPositiveOrder(InputError):
    pass


class ImprimitiveBranch(InputError):
    pass


class SchemaError(InputError):
    pass


class ConsistencyError(InputError):
    pass


class NotSquarefree(InputError):
    pass


class IrrationalBranch(InputError):
    """A branch needs Puiseux coefficients outside the rationals."""

    def __init__(self, message, edge=None, face_polynomial=None):
        self.edge = edge
        self.face_polynomial = face_polynomial
        super().__init__(message)


class UnknownBranch(InputError):
    pass


class CommonBranch(InputError):
    """Two curves share a branch, so their intersection is infinite."""


class PrecisionExhausted(SingcurveError):
    """An order could not be certified at the available truncation."""


class DivisionByHigherOrder(SingcurveError):
    pass


class NotEquisingular(SingcurveError):
    pass


class NotApplicable(SingcurveError):
    pass


class InternalError(SingcurveError):
    """An internal cross-check failed; always a bug."""


class InconsistentTangency(InternalError):
    pass
