"""Exception hierarchy for llscond."""


class LlsCondError(Exception):
    """Base class for all llscond errors."""


class ValidationError(LlsCondError, ValueError):
    """Malformed input: bad shapes, non-finite entries, empty data."""


class RankDeficientError(LlsCondError):
    """The coefficient matrix is numerically rank deficient.

    Sensitivity analysis of the least-squares solution requires full column
    rank: when the matrix is rank deficient, arbitrarily small changes to it
    can produce arbitrarily large changes to the solution, so a condition
    number with respect to the matrix does not exist (it is "infinite").
    """


class FactorizationError(LlsCondError):
    """A matrix factorization failed to converge."""


class ZeroSolutionError(LlsCondError):
    """The least-squares solution is zero.

    Perturbation sizes are measured relative to ``||x||_2``, which makes every
    relative condition quantity undefined for ``x = 0``.
    """


class DegenerateVectorsError(LlsCondError):
    """A pivot vector of a two-term outer-product sum vanished.

    Raised by the 2x2 Gram reduction, which orthonormalizes against the first
    vector of each pair; callers fall back to the rank-1 formulas instead.
    """


class ParseError(ValidationError):
    """A data file could not be parsed; carries a 1-based line (and column)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column
