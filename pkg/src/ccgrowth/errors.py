"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI lives in ``ccgrowth.cli``; library code only
raises these types and never calls ``sys.exit``.
"""


class CCGrowthError(Exception):
    """Base class for all library errors."""


class AlphabetError(CCGrowthError):
    """A letter or symbol does not belong to the alphabet in scope."""


class WordSyntaxError(CCGrowthError):
    """Malformed word text (bad token, bad exponent, unbalanced brackets)."""


class PresentationSyntaxError(CCGrowthError):
    """Malformed presentation source; carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" if column is None else f"line {line}, col {column}"
            message = f"{where}: {message}"
        super().__init__(message)


class DegenerateRelatorError(PresentationSyntaxError):
    """A relator freely reduces to the empty word."""


class DuplicateRelatorError(PresentationSyntaxError):
    """A relator equals another one up to rotation and inversion."""


class ParameterError(CCGrowthError):
    """Invalid numeric parameter (k = 0, radius 0 where forbidden, ...)."""


class CoverageError(CCGrowthError):
    """A conjugation rule was requested that the scheme mode does not emit."""


class UnsupportedContextError(CCGrowthError):
    """A decision procedure was invoked on a context without a C'(1/6) certificate."""


class ResourceBudgetError(CCGrowthError):
    """A computation exceeded its configured budget (length, candidates, radius)."""


class RadiusExceededError(CCGrowthError):
    """An element lies outside the explored ball; carries the cap."""

    def __init__(self, message, cap=None):
        self.cap = cap
        super().__init__(message)


class TrivialClassError(CCGrowthError):
    """The trivial conjugacy class was passed where a non-trivial one is required."""


class ArityError(CCGrowthError):
    """Tuple arity does not match the number of product factors."""
