"""Exception hierarchy shared by all modules."""


class AffcoxError(Exception):
    """Base class for library errors."""


class ParseError(AffcoxError, ValueError):
    """Malformed textual input (graph files, formulas, words, tables)."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnsupportedFamily(AffcoxError, ValueError):
    pass


class CapExceeded(AffcoxError, RuntimeError):
    """A size or depth cap guarding an exhaustive computation was hit."""


class CertificateError(AffcoxError, AssertionError):
    """A structural certificate failed; ``item`` names the failing check."""

    def __init__(self, item, message):
        super().__init__(f"item ({item}) failed: {message}")
        self.item = item


class ConsistencyError(AffcoxError, AssertionError):
    """Two independent computations of the same quantity disagreed."""


class PreconditionError(AffcoxError, ValueError):
    pass
