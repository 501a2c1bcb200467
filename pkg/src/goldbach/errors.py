"""Exception hierarchy shared by the library and the CLI.

Each class carries a ``category`` string that the CLI prints as the
``error:<category>:`` prefix and maps to an exit code.
"""


class GoldbachError(Exception):
    category = "error"


class DomainError(GoldbachError, ValueError):
    """Argument outside the mathematical domain of an operation."""

    category = "domain"


class OutOfRangeError(GoldbachError, IndexError):
    """Query beyond the limit of a prime table."""

    category = "range"


class CapacityError(GoldbachError, MemoryError):
    """Request exceeds a documented memory guard."""

    category = "capacity"


class InsufficientDataError(GoldbachError, ValueError):
    category = "insufficient-data"
