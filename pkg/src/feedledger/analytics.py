"""Statistics over the replayed state: leaderboard, interaction volumes,
contextualization rates, importance-filtered answer distributions, CSV export.

All aggregates are pure functions of ledger-derived state and therefore
reproducible from the log alone. Ratios use exact decimal arithmetic and
are reported rounded to three decimals.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP

from .errors import DomainError
from .questions import CTYPE_COMMENT, CTYPE_IMPORTANCE, CTYPE_SATISFACTION, QTYPES
from .state import INTERACTION_CATEGORIES, ApplicationState, ROLE_USER

_PCT_STEP = Decimal("0.001")
_MEAN_STEP = Decimal("0.001")


@dataclass(frozen=True)
class LeaderboardEntry:
    rank: int
    account: str
    context_tokens_earned: int


@dataclass(frozen=True)
class InteractionAggregate:
    category: str
    cohort: str
    user_class: str
    total: int
    mean_per_participant: Decimal


@dataclass(frozen=True)
class ContextualizationRate:
    qtype: str
    answers: int
    pct_satisfaction: Decimal
    pct_importance: Decimal
    pct_comment: Decimal


@dataclass(frozen=True)
class AnswerDistribution:
    question_id: str
    min_importance: int
    total: int
    counts: dict  # option index (or likert point) -> count


def leaderboard(state: ApplicationState, top_n: int | None = None) -> list[LeaderboardEntry]:
    """Rank accounts by Context tokens earned, not held: spending votes
    never costs rank. Ties go to whoever reached their total first."""
    order = sorted(
        state.earned_context.items(),
        key=lambda item: (-item[1], state.last_earn_seq.get(item[0], 0), item[0]),
    )
    if top_n is not None:
        order = order[: max(top_n, 0)]
    return [
        LeaderboardEntry(rank=i + 1, account=address, context_tokens_earned=earned)
        for i, (address, earned) in enumerate(order)
    ]


def _slice_accounts(state: ApplicationState, cohort: str, user_class: str) -> list[str]:
    members = []
    for account in state.accounts.values():
        if account.role != ROLE_USER:
            continue
        if cohort != "all" and account.cohort != cohort:
            continue
        if user_class != "all" and account.user_class != user_class:
            continue
        members.append(account.address)
    return members


def interaction_report(
    state: ApplicationState,
    cohort: str = "all",
    user_class: str = "all",
    categories: tuple[str, ...] = INTERACTION_CATEGORIES,
) -> list[InteractionAggregate]:
    if cohort != "all" and cohort not in state.policies:
        raise DomainError("unknown-cohort", f"cohort {cohort!r} has no policy")
    if user_class not in ("all", "user", "unaware-user"):
        raise DomainError("invalid-value", f"unknown user class {user_class!r}")
    for category in categories:
        if category not in INTERACTION_CATEGORIES:
            raise DomainError("invalid-value", f"unknown category {category!r}")
    members = _slice_accounts(state, cohort, user_class)
    participant_count = len(members)
    rows = []
    for category in categories:
        total = sum(state.interactions.get(address, {}).get(category, 0) for address in members)
        if participant_count:
            mean = (Decimal(total) / Decimal(participant_count)).quantize(
                _MEAN_STEP, rounding=ROUND_HALF_UP
            )
        else:
            mean = Decimal("0.000")
        rows.append(
            InteractionAggregate(
                category=category,
                cohort=cohort,
                user_class=user_class,
                total=total,
                mean_per_participant=mean,
            )
        )
    return rows


def contextualization_percentage(state: ApplicationState) -> list[ContextualizationRate]:
    """Share of answers per question type carrying each contextualization."""
    answer_counts = {qtype: 0 for qtype in QTYPES}
    context_counts = {qtype: {c: 0 for c in (CTYPE_SATISFACTION, CTYPE_IMPORTANCE, CTYPE_COMMENT)} for qtype in QTYPES}
    for answer in state.answers.values():
        answer_counts[answer.qtype] += 1
        attached = state.context_by_answer.get(answer.answer_id, {})
        for ctype in attached:
            context_counts[answer.qtype][ctype] += 1

    def pct(count: int, answers: int) -> Decimal:
        if answers == 0:
            return Decimal("0.000")
        return (Decimal(count) / Decimal(answers)).quantize(_PCT_STEP, rounding=ROUND_HALF_UP)

    return [
        ContextualizationRate(
            qtype=qtype,
            answers=answer_counts[qtype],
            pct_satisfaction=pct(context_counts[qtype][CTYPE_SATISFACTION], answer_counts[qtype]),
            pct_importance=pct(context_counts[qtype][CTYPE_IMPORTANCE], answer_counts[qtype]),
            pct_comment=pct(context_counts[qtype][CTYPE_COMMENT], answer_counts[qtype]),
        )
        for qtype in QTYPES
    ]


def differentiated_answers(
    state: ApplicationState, question_id: str, min_importance: int = 0
) -> AnswerDistribution:
    """Answer distribution restricted to responses rated important enough.

    With min_importance=0 the filter is vacuous; above 0 only answers that
    carry an Importance contextualization with rating >= threshold count.
    """
    question = state.questions.get(question_id)
    if question is None:
        raise DomainError("unknown-question", f"question {question_id!r} does not exist")
    if not isinstance(min_importance, int) or isinstance(min_importance, bool) or min_importance < 0:
        raise DomainError("invalid-value", "min_importance must be a non-negative integer")
    counts: dict[int, int] = {}
    total = 0
    for answer_id in state.answers_by_question.get(question_id, []):
        answer = state.answers[answer_id]
        if min_importance > 0:
            attached = state.context_by_answer.get(answer_id, {})
            context_id = attached.get(CTYPE_IMPORTANCE)
            if context_id is None:
                continue
            rating = state.contexts[context_id].rating
            if rating is None or rating < min_importance:
                continue
        total += 1
        if question.qtype == "likert":
            counts[answer.likert_value] = counts.get(answer.likert_value, 0) + 1
        else:
            for index in answer.selections:
                counts[index] = counts.get(index, 0) + 1
    return AnswerDistribution(
        question_id=question_id, min_importance=min_importance, total=total, counts=counts
    )


# -- CSV export / import -------------------------------------------------------

INTERACTION_COLUMNS = ("category", "cohort", "user_class", "total", "mean_per_participant")
CONTEXT_RATE_COLUMNS = ("qtype", "answers", "pct_satisfaction", "pct_importance", "pct_comment")
LEADERBOARD_COLUMNS = ("rank", "account", "context_tokens_earned")


def interaction_report_csv(rows: list[InteractionAggregate]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(INTERACTION_COLUMNS)
    for row in rows:
        writer.writerow([row.category, row.cohort, row.user_class, row.total, row.mean_per_participant])
    return out.getvalue()


def parse_interaction_report_csv(text: str) -> list[InteractionAggregate]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != INTERACTION_COLUMNS:
        raise DomainError("invalid-value", "unexpected interaction report header")
    return [
        InteractionAggregate(
            category=category,
            cohort=cohort,
            user_class=user_class,
            total=int(total),
            mean_per_participant=Decimal(mean),
        )
        for category, cohort, user_class, total, mean in reader
    ]


def contextualization_csv(rows: list[ContextualizationRate]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CONTEXT_RATE_COLUMNS)
    for row in rows:
        writer.writerow([row.qtype, row.answers, row.pct_satisfaction, row.pct_importance, row.pct_comment])
    return out.getvalue()


def parse_contextualization_csv(text: str) -> list[ContextualizationRate]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CONTEXT_RATE_COLUMNS:
        raise DomainError("invalid-value", "unexpected contextualization report header")
    return [
        ContextualizationRate(
            qtype=qtype,
            answers=int(answers),
            pct_satisfaction=Decimal(ps),
            pct_importance=Decimal(pi),
            pct_comment=Decimal(pc),
        )
        for qtype, answers, ps, pi, pc in reader
    ]


def leaderboard_csv(rows: list[LeaderboardEntry]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(LEADERBOARD_COLUMNS)
    for row in rows:
        writer.writerow([row.rank, row.account, row.context_tokens_earned])
    return out.getvalue()


def parse_leaderboard_csv(text: str) -> list[LeaderboardEntry]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != LEADERBOARD_COLUMNS:
        raise DomainError("invalid-value", "unexpected leaderboard header")
    return [
        LeaderboardEntry(rank=int(rank), account=account, context_tokens_earned=int(earned))
        for rank, account, earned in reader
    ]


def export_csv(text: str, path) -> None:
    from pathlib import Path

    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        from .errors import StorageUnavailable

        raise StorageUnavailable(f"cannot write report to {path}: {exc}") from exc
