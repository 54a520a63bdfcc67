"""Append-only hash-chained event log.

Every state mutation in the platform is one immutable event. Events are
chained by SHA-256: each record stores the digest of its predecessor, so
any byte-level tampering with history is detectable by recomputation.

Persisted format is one JSON object per line::

    {"seq":0,"timestamp":...,"actor":"...","kind":"...","payload":{...},"prev_hash":"00..0","hash":"ab..cd"}

The digest covers the canonical serialization of the first six fields:
that exact key order, payload keys sorted lexicographically (recursively),
no insignificant whitespace, integers base-10, UTF-8. Payload values are
restricted to JSON types minus floats so the encoding is bit-exact.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import LedgerCorrupt, MalformedRecord, StorageUnavailable

GENESIS_HASH = "0" * 64

EVENT_KINDS = frozenset(
    {
        "Register",
        "CreateQuestion",
        "Answer",
        "Contextualize",
        "MintToken",
        "TransferToken",
        "BurnToken",
        "CreatePost",
        "VotePost",
        "CommentPost",
        "DirectMessage",
        "Navigate",
        "ConfigChange",
    }
)

_HEX = set("0123456789abcdef")


def _utc_ms() -> int:
    return int(time.time() * 1000)


def _check_payload_value(value, where: str) -> None:
    if value is None or isinstance(value, (str, bool, int)):
        return
    if isinstance(value, float):
        raise ValueError(f"float in payload at {where}; use integers or strings")
    if isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _check_payload_value(item, f"{where}[{i}]")
        return
    if isinstance(value, dict):
        for key, item in value.items():
            if not isinstance(key, str):
                raise ValueError(f"non-string key in payload at {where}")
            _check_payload_value(item, f"{where}.{key}")
        return
    raise ValueError(f"unserializable {type(value).__name__} in payload at {where}")


def canonical_preimage(
    seq: int, timestamp: int, actor: str, kind: str, payload: dict, prev_hash: str
) -> bytes:
    """Serialize the hashed portion of an event, bit-exactly."""
    payload_json = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    text = '{"seq":%d,"timestamp":%d,"actor":%s,"kind":%s,"payload":%s,"prev_hash":%s}' % (
        seq,
        timestamp,
        json.dumps(actor, ensure_ascii=False),
        json.dumps(kind, ensure_ascii=False),
        payload_json,
        json.dumps(prev_hash),
    )
    return text.encode("utf-8")


def event_hash(seq: int, timestamp: int, actor: str, kind: str, payload: dict, prev_hash: str) -> str:
    return hashlib.sha256(canonical_preimage(seq, timestamp, actor, kind, payload, prev_hash)).hexdigest()


_RECORD_KEYS = frozenset({"seq", "timestamp", "actor", "kind", "payload", "prev_hash", "hash"})


def _parse_record(line: bytes, seq_hint: int) -> dict:
    """Parse and field-validate one log line into a plain dict."""
    try:
        obj = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedRecord(seq_hint, str(exc)) from exc
    if not isinstance(obj, dict):
        raise MalformedRecord(seq_hint, "not an object")
    if set(obj) != _RECORD_KEYS:
        raise MalformedRecord(seq_hint, "unexpected field set")
    if not isinstance(obj["seq"], int) or isinstance(obj["seq"], bool) or obj["seq"] < 0:
        raise MalformedRecord(seq_hint, "bad seq")
    if not isinstance(obj["timestamp"], int) or isinstance(obj["timestamp"], bool):
        raise MalformedRecord(seq_hint, "bad timestamp")
    if not isinstance(obj["actor"], str) or not isinstance(obj["kind"], str):
        raise MalformedRecord(seq_hint, "bad actor or kind")
    if not isinstance(obj["payload"], dict):
        raise MalformedRecord(seq_hint, "bad payload")
    for field in ("prev_hash", "hash"):
        value = obj[field]
        if not isinstance(value, str) or len(value) != 64 or not set(value) <= _HEX:
            raise MalformedRecord(seq_hint, f"bad {field}")
    return obj


def _line_digest_ok(obj: dict, line: bytes) -> bool:
    """Check the stored hash against the record's hashed portion.

    Fast path: a canonically written line is exactly preimage + hash field,
    so the preimage can be sliced straight out of the bytes. Lines in some
    other (but value-identical) layout fall back to re-serializing the
    parsed fields, which is the digest's actual definition.
    """
    suffix = (',"hash":"%s"}' % obj["hash"]).encode("ascii")
    if line.endswith(suffix):
        if hashlib.sha256(line[: -len(suffix)] + b"}").hexdigest() == obj["hash"]:
            return True
    return (
        event_hash(
            obj["seq"], obj["timestamp"], obj["actor"], obj["kind"], obj["payload"], obj["prev_hash"]
        )
        == obj["hash"]
    )


@dataclass(frozen=True)
class LedgerEvent:
    seq: int
    timestamp: int
    actor: str
    kind: str
    payload: dict
    prev_hash: str
    hash: str

    def to_line(self) -> bytes:
        head = canonical_preimage(
            self.seq, self.timestamp, self.actor, self.kind, self.payload, self.prev_hash
        )
        return head[:-1] + (',"hash":"%s"}' % self.hash).encode("ascii")

    @classmethod
    def from_line(cls, line: bytes, seq_hint: int) -> "LedgerEvent":
        obj = _parse_record(line, seq_hint)
        return cls(
            seq=obj["seq"],
            timestamp=obj["timestamp"],
            actor=obj["actor"],
            kind=obj["kind"],
            payload=obj["payload"],
            prev_hash=obj["prev_hash"],
            hash=obj["hash"],
        )


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    first_bad_seq: int | None
    checked: int


class _ChainChecker:
    """Incremental verifier: feed records in order, remembers the first break."""

    def __init__(self) -> None:
        self.prev_hash = GENESIS_HASH
        self.count = 0
        self.first_bad: int | None = None

    def feed_event(self, event: LedgerEvent) -> bool:
        return self._feed(
            event.seq,
            event.prev_hash,
            event.hash,
            event_hash(
                event.seq, event.timestamp, event.actor, event.kind, event.payload, event.prev_hash
            )
            == event.hash,
        )

    def feed_line(self, obj: dict, line: bytes) -> bool:
        return self._feed(obj["seq"], obj["prev_hash"], obj["hash"], _line_digest_ok(obj, line))

    def _feed(self, seq: int, prev_hash: str, digest: str, digest_ok: bool) -> bool:
        index = self.count
        self.count += 1
        if seq != index or prev_hash != self.prev_hash or not digest_ok:
            self.first_bad = index
            return False
        self.prev_hash = digest
        return True

    def feed_bad(self) -> None:
        self.first_bad = self.count
        self.count += 1

    def report(self) -> VerificationReport:
        return VerificationReport(ok=self.first_bad is None, first_bad_seq=self.first_bad, checked=self.count)


def verify_events(events: Sequence[LedgerEvent]) -> VerificationReport:
    """Check seq continuity, prev-hash links and digests over parsed events."""
    checker = _ChainChecker()
    for event in events:
        if not checker.feed_event(event):
            break
    return checker.report()


def verify_lines(lines: Iterable[bytes]) -> VerificationReport:
    """Verify raw log lines; an unparseable line counts as a violation there."""
    checker = _ChainChecker()
    for line in lines:
        try:
            obj = _parse_record(line, checker.count)
        except MalformedRecord:
            checker.feed_bad()
            break
        if not checker.feed_line(obj, line):
            break
    return checker.report()


def _split_lines(data: bytes) -> list[bytes]:
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    return lines


def verify_log_file(path: str | Path) -> VerificationReport:
    return verify_lines(_split_lines(Path(path).read_bytes()))


def read_log(path: str | Path) -> list[LedgerEvent]:
    """Parse a log file. Raises MalformedRecord on the first bad line."""
    events = []
    for i, line in enumerate(_split_lines(Path(path).read_bytes())):
        events.append(LedgerEvent.from_line(line, i))
    return events


class EventStore:
    """Single-writer, append-only store with optional file persistence.

    Appends are not internally synchronized; the owning service serializes
    writers. Readers may traverse ``events()`` concurrently and only ever
    observe fully committed records.
    """

    def __init__(
        self,
        path: str | Path | None = None,
        clock: Callable[[], int] | None = None,
        sync: bool = True,
    ):
        self._path = Path(path) if path is not None else None
        self._clock = clock or _utc_ms
        self._sync = sync
        self._events: list[LedgerEvent] = []
        self._last_hash = GENESIS_HASH
        self._last_ts = 0
        self._fh = None
        if self._path is not None:
            if self._path.exists() and self._path.stat().st_size > 0:
                self._load_existing()
            self._fh = open(self._path, "ab")

    def _load_existing(self) -> None:
        lines = _split_lines(self._path.read_bytes())
        checker = _ChainChecker()
        events = []
        for line in lines:
            event = LedgerEvent.from_line(line, checker.count)  # raises MalformedRecord
            if not checker.feed_event(event):
                raise LedgerCorrupt(checker.first_bad)
            events.append(event)
        self._events = events
        if events:
            self._last_hash = events[-1].hash
            self._last_ts = events[-1].timestamp

    @property
    def path(self) -> Path | None:
        return self._path

    @property
    def next_seq(self) -> int:
        return len(self._events)

    @property
    def last_hash(self) -> str:
        return self._last_hash

    def events(self) -> list[LedgerEvent]:
        return self._events

    def append(self, actor: str, kind: str, payload: dict) -> LedgerEvent:
        """Seal and durably persist one event; returns it with seq/ts/hash set.

        The store is the single timestamp authority: client-supplied times are
        never trusted, and assigned timestamps never decrease.
        """
        if kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {kind!r}")
        _check_payload_value(payload, "payload")
        seq = len(self._events)
        timestamp = max(int(self._clock()), self._last_ts)
        prev_hash = self._last_hash
        digest = event_hash(seq, timestamp, actor, kind, payload, prev_hash)
        event = LedgerEvent(
            seq=seq,
            timestamp=timestamp,
            actor=actor,
            kind=kind,
            payload=payload,
            prev_hash=prev_hash,
            hash=digest,
        )
        if self._fh is not None:
            try:
                self._fh.write(event.to_line() + b"\n")
                self._fh.flush()
                if self._sync:
                    import os

                    os.fsync(self._fh.fileno())
            except (OSError, ValueError) as exc:
                raise StorageUnavailable(f"cannot append to {self._path}: {exc}") from exc
        self._events.append(event)
        self._last_hash = digest
        self._last_ts = timestamp
        return event

    def verify(self) -> VerificationReport:
        """Re-verify the whole chain, from disk when file-backed."""
        if self._path is not None:
            if self._fh is not None:
                self._fh.flush()
            return verify_log_file(self._path)
        return verify_events(self._events)

    def flush(self) -> None:
        if self._fh is not None:
            self._fh.flush()
            import os

            os.fsync(self._fh.fileno())

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self) -> "EventStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
