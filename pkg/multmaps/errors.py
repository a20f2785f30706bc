"""
Exception hierarchy for multmaps.

Every error carries an `exit_code` so the command-line front end can map a
failure to its documented status without a lookup table of its own.
"""


class MultMapError(Exception):
    """Base class for every error raised by this package."""
    exit_code = 1


class ParseError(MultMapError, ValueError):
    exit_code = 2

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class DimensionMismatch(MultMapError, ValueError):
    exit_code = 3


class FieldMismatch(MultMapError, ValueError):
    exit_code = 3


class DivisionByZero(MultMapError, ZeroDivisionError):
    pass


class ProbeMiss(MultMapError, KeyError):
    """A sampled table was queried at a point it does not cover."""

    def __str__(self):
        return str(self.args[0]) if self.args else 'probe miss'


class IndexOutOfRange(MultMapError, IndexError):
    pass


class SingularMatrix(MultMapError, ValueError):
    pass


class NotSpecialLinear(MultMapError, ValueError):
    pass


class NotMatrixUnits(MultMapError, ValueError):
    pass


class SingularRecovery(MultMapError):
    pass


class NotCommutingIdempotents(MultMapError, ValueError):
    pass


class SingularConjugator(MultMapError, ValueError):
    pass


class UnregisteredHom(MultMapError):
    pass


class UnsupportedDimension(MultMapError, ValueError):
    exit_code = 6


class NotMultiplicative(MultMapError):
    exit_code = 4


class RankLadderViolation(NotMultiplicative):
    pass


class NonDiagonalizableTrivial(MultMapError):
    """Trivial-map images that cannot be diagonalised together, with the raw probe data attached."""

    def __init__(self, message, probes=()):
        self.probes = tuple(probes)
        super().__init__(message)


class OracleBudgetExceeded(MultMapError):
    pass


class VerificationFailed(MultMapError):
    exit_code = 5

    def __init__(self, message, counterexample=None):
        self.counterexample = counterexample
        super().__init__(message)
