"""Exception types raised across the package."""


class StrataforgeError(Exception):
    """Base class for all package errors."""


class SizeLimitError(StrataforgeError, ValueError):
    pass


class InvalidVertexError(StrataforgeError, ValueError):
    pass


class DegeneracyError(StrataforgeError, ArithmeticError):
    """Raised when a quadrature node is a repeated root."""


class ConsistencyError(StrataforgeError, RuntimeError):
    """An internal identity that must hold exactly did not."""


class ValidationError(StrataforgeError, ValueError):
    pass
