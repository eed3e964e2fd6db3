"""
Exception hierarchy for frobkit.

Every error carries an ``exit_code`` so the CLI and the HTTP service can map
failures without inspecting class names:

    1  parse / IO problems in the input
    2  a mathematical hypothesis does not hold for the input
    3  a computation budget was exhausted
"""

from typing import Any, Optional


class FrobkitError(Exception):
    """Base class for all frobkit errors"""
    exit_code = 2

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": self.message}


# Input errors
class InputError(FrobkitError):
    exit_code = 1


class ParseError(InputError):
    """Malformed ring file or expression"""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column

    def to_dict(self) -> dict:
        data = super().to_dict()
        data.update(line=self.line, column=self.column)
        return data


class UnknownVariable(ParseError):
    def __init__(self, name: str, line: int = 0, column: int = 0):
        super().__init__(f"unknown variable '{name}'", line, column)
        self.name = name


class NonPrimeModulus(InputError):
    def __init__(self, p: int):
        super().__init__(f"modulus {p} is not a prime below 2^31")
        self.p = p


# Algebra errors
class RingMismatch(FrobkitError):
    """Operands live in different rings"""


class ExponentOverflow(FrobkitError):
    """An exponent left the 32-bit range"""


class BudgetExceeded(FrobkitError):
    exit_code = 3

    def __init__(self, message: str, stats: Optional[Any] = None, partial: Optional[Any] = None):
        super().__init__(message)
        self.stats = stats
        self.partial = partial


class NotZeroDimensional(FrobkitError):
    """The quotient has positive Krull dimension where colength is required"""


class UnitIdeal(FrobkitError):
    """The ideal contains 1"""


class NotIrreducible(FrobkitError):
    """The socle of R/J has dimension greater than one"""

    def __init__(self, message: str, socle_dimension: int = 0):
        super().__init__(message)
        self.socle_dimension = socle_dimension


class NotGorenstein(NotIrreducible):
    """The parameter ideal is not irreducible, so R is not Gorenstein"""


class HypothesisViolation(FrobkitError):
    """A standing hypothesis of a formula does not hold"""


class NotHypersurface(HypothesisViolation):
    pass


class NotFPure(HypothesisViolation):
    pass


class SOPNotFound(FrobkitError):
    pass


class InsufficientSamples(FrobkitError):
    pass


class ChainExhausted(FrobkitError):
    """t-stabilization was not reached within the supplied chain"""

    def __init__(self, message: str, partial: Optional[Any] = None):
        super().__init__(message)
        self.partial = partial


class IdentityViolation(FrobkitError):
    """Two independent computations of the same length disagree (engine bug)"""

    def __init__(self, message: str):
        super().__init__(f"internal consistency failure: {message}")
