"""feedledger: a feedback platform with token incentives on a hash-chained ledger."""

from .errors import (
    DomainError,
    LedgerCorrupt,
    LedgerError,
    MalformedRecord,
    ReplayDivergence,
    StorageUnavailable,
)
from .eventlog import (
    EventStore,
    LedgerEvent,
    VerificationReport,
    read_log,
    verify_events,
    verify_lines,
    verify_log_file,
)
from .incentives import DEFAULT_POLICIES, IncentivePolicy
from .platform import FeedbackPlatform
from .questions import Question
from .state import ApplicationState, replay, state_from_snapshot, write_snapshot
from .tokens import CONTEXT, MONEY, chf_value
from .wall import WallPost, ranked_wall

__version__ = "0.1.0"

__all__ = [
    "ApplicationState",
    "CONTEXT",
    "DEFAULT_POLICIES",
    "DomainError",
    "EventStore",
    "FeedbackPlatform",
    "IncentivePolicy",
    "LedgerCorrupt",
    "LedgerError",
    "LedgerEvent",
    "MONEY",
    "MalformedRecord",
    "Question",
    "ReplayDivergence",
    "StorageUnavailable",
    "VerificationReport",
    "WallPost",
    "chf_value",
    "ranked_wall",
    "read_log",
    "replay",
    "state_from_snapshot",
    "verify_events",
    "verify_lines",
    "verify_log_file",
    "write_snapshot",
]
