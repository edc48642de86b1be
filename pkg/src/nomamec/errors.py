"""Exception types raised by the library."""


class NomaMecError(Exception):
    """Base class for all library errors."""


class ConfigurationError(NomaMecError, ValueError):
    """Invalid parameter combination (ordering indices, power fractions, ...)."""


class RangeError(NomaMecError, ValueError):
    """Population too large for the alternating binomial sums to stay accurate."""


class DomainError(NomaMecError, ValueError):
    """Input outside the mathematical domain of an operation."""


class NumericError(NomaMecError, ArithmeticError):
    """A closed form produced a non-finite or out-of-range value.

    ``index`` identifies the offending summand, e.g. ``(p, l)``, when known.
    """

    def __init__(self, message, index=None):
        if index is not None:
            message = f"{message} (summand {index})"
        super().__init__(message)
        self.index = index
