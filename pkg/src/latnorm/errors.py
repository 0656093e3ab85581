"""Exception hierarchy shared by every latnorm module."""


class LatnormError(Exception):
    pass


class EmptySetError(LatnormError, ValueError):
    pass


class CoordinateOverflow(LatnormError, ArithmeticError):
    """A coordinate or matrix entry left the signed 64-bit range."""


class NotPrimitiveError(LatnormError, ValueError):
    pass


class ZeroVectorError(LatnormError, ValueError):
    pass


class NotDigitalConvexError(LatnormError, ValueError):
    pass


class DegenerateTopError(LatnormError, ValueError):
    pass


class PreconditionViolation(LatnormError, ValueError):
    pass


class InvariantViolation(LatnormError, AssertionError):
    """A property the construction proves can never fail did fail."""


class FallbackEngaged(LatnormError):
    pass


class NormalizationFailed(LatnormError):
    pass


class BadParams(LatnormError, ValueError):
    pass


class ParseError(LatnormError, ValueError):
    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason
