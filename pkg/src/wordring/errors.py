"""Exception types shared across the package."""


class WordringError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(WordringError):
    """An in-memory object violates one of its invariants."""


class ParseError(WordringError):
    """A text input file is malformed. Carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class VocabularyError(WordringError):
    """A word is unknown, duplicated, or missing where the vocabulary requires it."""


class DegenerateComponentError(WordringError):
    """A requested principal component is undefined (eigenvalue numerically zero)."""


class ParameterMismatchError(WordringError):
    """Two blurred vectors were built with incompatible tours or kernel parameters."""
