"""Exception taxonomy shared by all cbvr modules."""

from __future__ import annotations


class CbvrError(Exception):
    """Base class for every error raised by this package."""


class CorpusParseError(CbvrError):
    """Malformed input file. Carries a human-readable location."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class CorpusValidationError(CbvrError):
    """Well-formed input that violates a corpus constraint."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class InvalidCorpusError(CbvrError):
    """Corpus state that makes a weight undefined (e.g. zero denominators)."""


class UnknownIdError(CbvrError, KeyError):
    """Lookup of an id that does not exist in the index."""

    def __init__(self, kind: str, ids):
        self.kind = kind
        self.ids = tuple(ids) if isinstance(ids, (list, tuple, set, frozenset)) else (ids,)
        listed = ", ".join(str(i) for i in self.ids)
        Exception.__init__(self, f"unknown {kind}: {listed}")

    def __str__(self) -> str:
        return self.args[0]


class EmptyQueryError(CbvrError):
    """Query text is empty or every token was removed as a stopword."""


class DimensionMismatchError(CbvrError):
    """Query and matrix were built against different concept universes."""


class SnapshotError(CbvrError):
    """Snapshot file is missing the expected magic header or version."""


class SessionConflictError(CbvrError):
    """A second writer tried to mutate a session that is being updated."""
