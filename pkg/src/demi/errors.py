"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so the class names are part of the
command-line contract.
"""


class DemiError(Exception):
    """Base class for library errors."""

    exit_code = 1


class ParseError(DemiError, ValueError):
    exit_code = 2


class DomainError(DemiError, ValueError):
    exit_code = 3


class NoConvergence(DemiError, ArithmeticError):
    exit_code = 4


class NoSignChange(NoConvergence):
    """Bracket endpoints do not straddle a root."""


class EvaluationFailure(DemiError, ArithmeticError):
    exit_code = 4


class NegativeRadicand(EvaluationFailure):
    """A square root received a negative argument; signals a precision fault."""


class DepthError(DemiError, ValueError):
    exit_code = 3


class OutOfRange(DemiError, IndexError):
    exit_code = 3


class CorpusError(DemiError):
    exit_code = 5
