"""Exception hierarchy.

The CLI maps these onto exit codes: DataError -> 3, CapacityError and
SolverError -> 4, ContractError -> 2.
"""


class MoqueryError(Exception):
    """Base class for all errors raised by this package."""


class ContractError(MoqueryError, ValueError):
    """A caller broke an operation's precondition (arity, k range, ...)."""


class DataError(MoqueryError):
    """Input data cannot be turned into a valid dataset or query."""


class LoadError(DataError):
    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


class EmptyDatasetError(DataError):
    pass


class EmptyPreferenceSet(DataError):
    def __init__(self, message="empty preference set"):
        super().__init__(message)


class CapacityError(MoqueryError):
    """A configured size cap (LP dimensions, vertex enumeration) was exceeded."""


class SolverError(MoqueryError):
    """The LP solver could not produce a trustworthy answer."""
