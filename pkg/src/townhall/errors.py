"""Exception types shared across the package."""


class TownhallError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(TownhallError):
    """Malformed input file. Carries enough context to name the offending row."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ProfileError(TownhallError):
    """Fixture profile cannot be satisfied (e.g. too dense to survive debouncing)."""


class ConflictError(TownhallError):
    """Optimistic-concurrency conflict (stale version or duplicate key)."""


class NotFoundError(TownhallError):
    """Referenced document does not exist in the store."""
