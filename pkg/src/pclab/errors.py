"""Exception hierarchy shared by every pclab module."""


class PCLabError(Exception):
    """Base class for all computation errors raised by pclab."""


class ConductorOverflowError(PCLabError):
    """Merging two conductors would exceed the configured phi-degree cap."""

    def __init__(self, conductor, phi, cap):
        self.conductor = conductor
        self.phi = phi
        self.cap = cap
        super().__init__(
            f"Q(zeta({conductor})) has degree {phi}, above the cap of {cap}"
        )


class CycloZeroDivisionError(PCLabError, ZeroDivisionError):
    def __init__(self, operand):
        self.operand = operand
        super().__init__(f"division by zero (divisor {operand})")


class UnsupportedFieldError(PCLabError):
    """An operation restricted to rational values received an irrational one."""


class InvalidDenominatorError(PCLabError):
    """A rational series whose denominator vanishes at the origin."""


class ArityError(PCLabError):
    """Variable counts of operands do not agree."""


class InsufficientDataError(PCLabError):
    pass


class VerificationError(PCLabError):
    """A reconstructed object failed its exact re-check."""


class GrowthLengthError(PCLabError, ValueError):
    pass


class DSLSyntaxError(PCLabError):
    def __init__(self, message, line, column, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class DSLSemanticError(PCLabError):
    pass
