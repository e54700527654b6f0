"""Exception hierarchy for the Subset Sum solver suite.

Every error raised by the package derives from ``SubsetSumError`` so callers
(most importantly the CLI, which maps them to exit status 2) can catch the
whole family at once.
"""


class SubsetSumError(Exception):
    """Base exception for all solver suite errors.

    Example:
        >>> try:
        ...     parse_instance(b"2 4\\n3 -1")
        ... except SubsetSumError as e:
        ...     print(f"rejected: {e}")
    """


class InstanceParseError(SubsetSumError):
    """Instance text could not be parsed.

    Attributes:
        line: 1-based line of the offending token
        column: 1-based column of the offending token
    """

    def __init__(self, message: str, line: int, column: int):
        """Initialize with the position of the offending token.

        Args:
            message: Error message
            line: 1-based line number
            column: 1-based column number
        """
        super().__init__(f"{message} (line {line}, column {column})")
        self.reason = message
        self.line = line
        self.column = column


class ArgumentError(SubsetSumError):
    """A precondition on an operation's arguments was violated."""


class UnsupportedError(SubsetSumError):
    """The requested configuration is outside what the suite implements."""


class FieldDomainError(SubsetSumError):
    """A field operation was applied outside its domain (e.g. inverse of zero)."""


class DeciderFaultError(SubsetSumError):
    """A decision procedure answered YES but no completing subset was found."""


class SolverInvariantError(SubsetSumError):
    """An internal postcondition check failed."""


class RunCancelledError(SubsetSumError):
    """A run stopped early because its cancellation event was set."""
