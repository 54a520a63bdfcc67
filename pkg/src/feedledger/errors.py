"""Exception types shared across the platform.

Domain rule violations carry a stable machine-readable ``code`` that the
HTTP layer maps 1:1 into ``{code, message}`` error bodies.
"""

from __future__ import annotations


class LedgerError(Exception):
    """Base for failures of the persistence layer itself."""

    code = "ledger-error"


class StorageUnavailable(LedgerError):
    """The log file could not be written; no state was changed."""

    code = "storage-unavailable"


class MalformedRecord(LedgerError):
    """A persisted log line could not be parsed back into an event."""

    code = "malformed-record"

    def __init__(self, seq: int, reason: str):
        super().__init__(f"record at seq {seq} is malformed: {reason}")
        self.seq = seq


class LedgerCorrupt(LedgerError):
    """Chain verification failed while opening an existing log."""

    code = "ledger-corrupt"

    def __init__(self, first_bad_seq: int):
        super().__init__(f"hash chain broken at seq {first_bad_seq}")
        self.first_bad_seq = first_bad_seq


class ReplayDivergence(LedgerError):
    """An event in the log is invalid against the replayed state.

    A verified chain that still fails application means the history was
    written by incompatible or buggy code, not merely bit-flipped.
    """

    code = "replay-divergence"

    def __init__(self, seq: int, reason: str):
        super().__init__(f"event at seq {seq} cannot be applied: {reason}")
        self.seq = seq


class DomainError(Exception):
    """A rejected operation. State is left untouched by the raiser."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message

    def __repr__(self) -> str:  # pragma: no cover
        return f"DomainError({self.code!r}, {self.message!r})"
