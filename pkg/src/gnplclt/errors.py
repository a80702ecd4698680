"""Exception hierarchy shared by all modules.

The CLI maps these onto process exit codes: InvalidParameterError -> 2,
DomainError -> 3, NumericError -> 4.
"""


class GnplcltError(Exception):
    """Base class for all toolkit errors."""


class InvalidParameterError(GnplcltError, ValueError):
    """An argument is outside the operation's admissible range."""


class DomainError(GnplcltError, ValueError):
    """Parameters are valid individually but violate a stated hypothesis."""


class NumericError(GnplcltError, ArithmeticError):
    """A numerical procedure failed to converge or lost validity."""


class ResourceLimitError(GnplcltError, ValueError):
    """A configurable resource ceiling (e.g. enumeration size) was exceeded."""


class DegenerateDistributionError(GnplcltError, ValueError):
    """The distribution has zero variance, so standardisation is undefined."""


class CoverageError(GnplcltError, ValueError):
    """A grid or pmf does not cover the range an operation requires."""
