"""Exception hierarchy shared by the parser, the reasoner and the CLI."""

from __future__ import annotations


class FolkbError(Exception):
    """Base class for every error raised by this package."""


class ParseError(FolkbError):
    """Malformed ``.folkb`` input. Always carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int, source: str = "<string>"):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


class SignatureError(FolkbError):
    """Knowledge base violates a signature invariant (arity, Omega, constants)."""


class GroundingError(FolkbError):
    """A rule or sentence cannot be grounded over the constant set."""


class ResourceLimitError(FolkbError):
    """An exhaustive enumeration would exceed its configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: {size} atoms exceeds the enumeration cap of {cap}")
