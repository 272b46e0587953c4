"""Exception hierarchy.

Every error carries a stable ``code`` string and the CLI exit status it maps
to, so scripts can rely on either.
"""


class CanonTriError(Exception):
    code = "EInternal"
    exit_status = 1


class ParseError(CanonTriError):
    code = "EParse"
    exit_status = 2


class WordEmptyError(ParseError):
    code = "EWordEmpty"


class WordNotMixedError(CanonTriError):
    """The word uses a single letter, so the monodromy is not Anosov."""

    code = "EWordNotMixed"
    exit_status = 3


class TooFewSyllablesError(CanonTriError):
    code = "ETooFewSyllables"
    exit_status = 3


class NotAnosovError(CanonTriError):
    code = "ENotAnosov"
    exit_status = 3


class DimensionMismatchError(CanonTriError):
    code = "EDimensionMismatch"


class OutOfRangeError(CanonTriError):
    code = "EOutOfRange"


class AngleSumError(CanonTriError):
    code = "EAngleSum"


class BoundaryError(CanonTriError):
    """Raised when a derivative is requested at a point with a flat angle."""

    code = "EBoundary"


class InfeasibleError(CanonTriError):
    code = "EInfeasible"


class NotConvergedError(CanonTriError):
    code = "ENotConverged"
    exit_status = 4

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegenerateError(CanonTriError):
    code = "EDegenerate"


class NoContractionError(CanonTriError):
    code = "ENoContraction"
    exit_status = 4
