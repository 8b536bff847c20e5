"""Exception hierarchy shared across the toolchain."""


class NameloomError(Exception):
    """Base class for all toolchain errors."""


class ParseError(NameloomError):
    """Source text could not be parsed as ECMAScript.

    Carries the byte offset plus 1-based line/column of the failure so
    corpus runs can log a usable diagnostic and move on.
    """

    def __init__(self, message: str, offset: int, line: int, column: int):
        super().__init__(f"{message} (line {line}, col {column})")
        self.reason = message
        self.offset = offset
        self.line = line
        self.column = column


class BuildError(NameloomError):
    """Corpus index could not be built (empty corpus, no parseable files)."""


class LoadError(NameloomError):
    """Persisted index could not be loaded."""

    BAD_MAGIC = "BadMagic"
    VERSION_MISMATCH = "VersionMismatch"
    TRUNCATED = "Truncated"
    CHECKSUM = "ChecksumMismatch"
    MALFORMED = "Malformed"

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason


class MatchError(NameloomError):
    """Graph matching is undefined (query graph has no edges)."""


class EmptyRecovery(NameloomError):
    """Beam search received no variable with a non-empty candidate list."""


class EmptyTestSet(NameloomError):
    """Evaluation split selected no test files."""
