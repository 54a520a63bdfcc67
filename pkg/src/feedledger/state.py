"""Application state derived purely from the event log.

Every event kind has a ``check`` (raises DomainError, touches nothing) and
a ``mutate`` (infallible once checked). The live write path runs check
before the event is persisted, so a log produced by this code always
replays cleanly; replay re-runs the same pair and treats a check failure
as corrupted history.

Token flow events (MintToken/TransferToken/BurnToken) are first-class
records decided by the incentive layer at live time. Replay applies their
balance effects directly and never re-runs reward decisions, which keeps
rewards exactly-once.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .errors import DomainError, ReplayDivergence
from .eventlog import LedgerEvent
from .incentives import IncentivePolicy
from .questions import (
    CTYPE_COMMENT,
    Question,
    validate_answer_body,
    validate_contextualization,
)
from .tokens import CONTEXT, MONEY
from .wall import (
    VOTE_DIRECTIONS,
    DirectMessage,
    PostComment,
    Vote,
    WallPost,
)

TREASURY_ADDRESS = "treasury"

ROLE_USER = "user"
ROLE_TREASURY = "treasury"
ROLE_ADMIN = "admin"

USER_CLASSES = ("user", "unaware-user")

NAV_VIEWS = ("question", "statistics", "open_feedback", "about")

INTERACTION_CATEGORIES = (
    "solicited",
    "unsolicited",
    "importance",
    "satisfaction",
    "comments",
    "nav_question",
    "nav_statistics",
    "nav_open_feedback",
    "nav_about",
)


@dataclass
class Account:
    address: str
    role: str
    cohort: str
    user_class: str
    login_key_hash: str
    registered_seq: int


@dataclass
class AnswerRecord:
    answer_id: str
    question_id: str
    account: str
    qtype: str
    selections: tuple[int, ...]
    likert_value: int | None
    free_text: str | None
    timestamp: int
    first_seq: int


@dataclass(frozen=True)
class Contextualization:
    context_id: str
    answer_id: str
    account: str
    ctype: str
    rating: int | None
    text: str | None
    timestamp: int


def _unknown_account(address: str) -> DomainError:
    return DomainError("unknown-account", f"account {address!r} is not registered")


def _require_id(payload: dict, field: str) -> str:
    value = payload.get(field)
    if not isinstance(value, str) or not value:
        raise DomainError("invalid-value", f"{field} must be a non-empty string")
    return value


class ApplicationState:
    """Mutable projection of the ledger; rebuild it any time by replay."""

    def __init__(self) -> None:
        self.applied_seq = -1
        self.money_supply: int | None = None
        self.accounts: dict[str, Account] = {}
        self.balances: dict[str, dict[str, int]] = {}
        self.context_minted = 0
        self.context_burned = 0
        self.earned_context: dict[str, int] = {}
        self.last_earn_seq: dict[str, int] = {}
        self.policies: dict[str, IncentivePolicy] = {}
        self.area_tags: tuple[str, ...] = ()
        self.questions: dict[str, Question] = {}
        self.question_order: list[str] = []
        self.answers: dict[str, AnswerRecord] = {}
        self.answer_by_pair: dict[tuple[str, str], str] = {}
        self.answers_by_question: dict[str, list[str]] = {}
        self.contexts: dict[str, Contextualization] = {}
        self.context_by_answer: dict[str, dict[str, str]] = {}
        self.posts: dict[str, WallPost] = {}
        self.post_order: list[str] = []
        self.votes: dict[tuple[str, str], Vote] = {}
        self.comments: dict[str, list[PostComment]] = {}
        self.messages: list[DirectMessage] = []
        self.interactions: dict[str, dict[str, int]] = {}

    # -- shared lookups ----------------------------------------------------

    def account(self, address: str) -> Account:
        try:
            return self.accounts[address]
        except KeyError:
            raise _unknown_account(address) from None

    def balance(self, address: str, token: str) -> int:
        return self.balances.get(address, {}).get(token, 0)

    def policy_for(self, address: str) -> IncentivePolicy:
        cohort = self.account(address).cohort
        try:
            return self.policies[cohort]
        except KeyError:
            raise DomainError("unknown-cohort", f"no policy configured for cohort {cohort!r}") from None

    def context_circulating(self) -> int:
        return self.context_minted - self.context_burned

    def _credit(self, address: str, token: str, amount: int) -> None:
        self.balances.setdefault(address, {MONEY: 0, CONTEXT: 0})
        self.balances[address][token] += amount

    def _debit(self, address: str, token: str, amount: int) -> None:
        self.balances[address][token] -= amount
        assert self.balances[address][token] >= 0, "overdraft slipped past checks"

    def _count(self, address: str, category: str) -> None:
        per_account = self.interactions.setdefault(address, {})
        per_account[category] = per_account.get(category, 0) + 1

    # -- Register ----------------------------------------------------------

    def check_register(self, event: LedgerEvent) -> None:
        p = event.payload
        address = p.get("address")
        if not isinstance(address, str) or not address.strip():
            raise DomainError("invalid-value", "address must be a non-empty string")
        if address in self.accounts or address == TREASURY_ADDRESS:
            raise DomainError("pseudonym-taken", f"address {address!r} already registered")
        if p.get("role") not in (ROLE_USER, ROLE_ADMIN):
            raise DomainError("invalid-value", "role must be user or admin")
        if p.get("user_class") not in USER_CLASSES:
            raise DomainError("invalid-value", f"user_class must be one of {USER_CLASSES}")
        if p.get("cohort") not in self.policies:
            raise DomainError("unknown-cohort", f"cohort {p.get('cohort')!r} has no policy")

    def mutate_register(self, event: LedgerEvent) -> None:
        p = event.payload
        self.accounts[p["address"]] = Account(
            address=p["address"],
            role=p["role"],
            cohort=p["cohort"],
            user_class=p["user_class"],
            login_key_hash=p.get("login_key_hash", ""),
            registered_seq=event.seq,
        )
        self.balances.setdefault(p["address"], {MONEY: 0, CONTEXT: 0})

    # -- CreateQuestion ----------------------------------------------------

    def check_create_question(self, event: LedgerEvent) -> None:
        question = Question.from_payload(event.payload)
        question.validate_spec()
        if question.question_id in self.questions:
            raise DomainError("invalid-spec", f"question id {question.question_id!r} already exists")
        actor = self.account(event.actor)
        if actor.role != ROLE_ADMIN:
            raise DomainError("admin-required", "only admin accounts may create questions")

    def mutate_create_question(self, event: LedgerEvent) -> None:
        question = Question.from_payload(event.payload)
        self.questions[question.question_id] = question
        self.question_order.append(question.question_id)
        self.answers_by_question.setdefault(question.question_id, [])

    # -- Answer --------------------------------------------------------------

    def check_answer(self, event: LedgerEvent) -> None:
        p = event.payload
        self.account(event.actor)
        question = self.questions.get(p.get("question_id"))
        if question is None:
            raise DomainError("unknown-question", f"question {p.get('question_id')!r} does not exist")
        if not question.active:
            raise DomainError("unknown-question", f"question {question.question_id!r} is not active")
        validate_answer_body(
            question,
            selections=p.get("selections", []),
            likert_value=p.get("likert_value"),
            free_text=p.get("free_text"),
        )
        answer_id = _require_id(p, "answer_id")
        pair = (event.actor, question.question_id)
        existing = self.answer_by_pair.get(pair)
        if existing is None:
            if answer_id in self.answers:
                raise DomainError("invalid-value", f"answer id {answer_id!r} already used")
        elif existing != answer_id:
            raise DomainError("invalid-value", "re-answer must keep its original answer id")

    def mutate_answer(self, event: LedgerEvent) -> None:
        p = event.payload
        question = self.questions[p["question_id"]]
        selections, likert_value, free_text = validate_answer_body(
            question,
            selections=p.get("selections", []),
            likert_value=p.get("likert_value"),
            free_text=p.get("free_text"),
        )
        pair = (event.actor, question.question_id)
        existing_id = self.answer_by_pair.get(pair)
        if existing_id is None:
            record = AnswerRecord(
                answer_id=p["answer_id"],
                question_id=question.question_id,
                account=event.actor,
                qtype=question.qtype,
                selections=selections,
                likert_value=likert_value,
                free_text=free_text,
                timestamp=event.timestamp,
                first_seq=event.seq,
            )
            self.answers[record.answer_id] = record
            self.answer_by_pair[pair] = record.answer_id
            self.answers_by_question[question.question_id].append(record.answer_id)
        else:
            record = self.answers[existing_id]
            record.selections = selections
            record.likert_value = likert_value
            record.free_text = free_text
            record.timestamp = event.timestamp
        self._count(event.actor, "solicited")

    # -- Contextualize -------------------------------------------------------

    def check_contextualize(self, event: LedgerEvent) -> None:
        p = event.payload
        self.account(event.actor)
        answer = self.answers.get(p.get("answer_id"))
        if answer is None:
            raise DomainError("unknown-answer", f"answer {p.get('answer_id')!r} does not exist")
        if answer.account != event.actor:
            raise DomainError("foreign-answer", "answers can only be contextualized by their author")
        context_id = _require_id(p, "context_id")
        if context_id in self.contexts:
            raise DomainError("invalid-value", f"context id {context_id!r} already used")
        ctype = p.get("ctype")
        validate_contextualization(ctype, p.get("rating"), p.get("text"))
        if ctype in self.context_by_answer.get(answer.answer_id, {}):
            raise DomainError(
                "duplicate-contextualization",
                f"answer {answer.answer_id!r} already has a {ctype} contextualization",
            )

    def mutate_contextualize(self, event: LedgerEvent) -> None:
        p = event.payload
        record = Contextualization(
            context_id=p["context_id"],
            answer_id=p["answer_id"],
            account=event.actor,
            ctype=p["ctype"],
            rating=p.get("rating"),
            text=p.get("text"),
            timestamp=event.timestamp,
        )
        self.contexts[record.context_id] = record
        self.context_by_answer.setdefault(record.answer_id, {})[record.ctype] = record.context_id
        category = "comments" if record.ctype == CTYPE_COMMENT else record.ctype
        self._count(event.actor, category)

    # -- token flows -----------------------------------------------------------

    def _check_amount(self, amount) -> int:
        if not isinstance(amount, int) or isinstance(amount, bool) or amount <= 0:
            raise DomainError("non-positive-amount", "token amount must be a positive integer")
        return amount

    def check_mint_token(self, event: LedgerEvent) -> None:
        p = event.payload
        if p.get("token") != CONTEXT:
            raise DomainError("invalid-value", "only the context token can be minted")
        self._check_amount(p.get("amount"))
        self.account(p.get("to", ""))

    def mutate_mint_token(self, event: LedgerEvent) -> None:
        p = event.payload
        self._credit(p["to"], CONTEXT, p["amount"])
        self.context_minted += p["amount"]
        self.earned_context[p["to"]] = self.earned_context.get(p["to"], 0) + p["amount"]
        self.last_earn_seq[p["to"]] = event.seq

    def check_transfer_token(self, event: LedgerEvent) -> None:
        p = event.payload
        if p.get("token") not in (MONEY, CONTEXT):
            raise DomainError("invalid-value", f"unknown token {p.get('token')!r}")
        amount = self._check_amount(p.get("amount"))
        sender, recipient = p.get("from", ""), p.get("to", "")
        for address in (sender, recipient):
            if address == TREASURY_ADDRESS:
                if TREASURY_ADDRESS not in self.balances:
                    raise _unknown_account(address)
            else:
                self.account(address)
        if sender == recipient:
            raise DomainError("invalid-value", "transfer requires distinct accounts")
        if self.balance(sender, p["token"]) < amount:
            raise DomainError(
                "insufficient-balance",
                f"{sender!r} holds {self.balance(sender, p['token'])} {p['token']}, needs {amount}",
            )

    def mutate_transfer_token(self, event: LedgerEvent) -> None:
        p = event.payload
        self._debit(p["from"], p["token"], p["amount"])
        self._credit(p["to"], p["token"], p["amount"])

    def check_burn_token(self, event: LedgerEvent) -> None:
        p = event.payload
        if p.get("token") != CONTEXT:
            raise DomainError("invalid-value", "only the context token can be burned")
        amount = self._check_amount(p.get("amount"))
        sender = p.get("from", "")
        self.account(sender)
        if self.balance(sender, CONTEXT) < amount:
            raise DomainError(
                "insufficient-balance",
                f"{sender!r} holds {self.balance(sender, CONTEXT)} context, needs {amount}",
            )

    def mutate_burn_token(self, event: LedgerEvent) -> None:
        p = event.payload
        self._debit(p["from"], CONTEXT, p["amount"])
        self.context_burned += p["amount"]

    # -- wall ------------------------------------------------------------------

    def check_create_post(self, event: LedgerEvent) -> None:
        p = event.payload
        self.account(event.actor)
        text = p.get("text")
        if not isinstance(text, str) or not text.strip():
            raise DomainError("empty-text", "post text must be non-empty")
        tags = p.get("area_tags", [])
        if not isinstance(tags, list) or any(not isinstance(t, str) for t in tags):
            raise DomainError("invalid-value", "area_tags must be a list of strings")
        vocabulary = set(self.area_tags)
        for tag in tags:
            if tag not in vocabulary:
                raise DomainError("unknown-tag", f"area tag {tag!r} is not in the configured vocabulary")
        if len(set(tags)) != len(tags):
            raise DomainError("invalid-value", "duplicate area tag")
        if _require_id(p, "post_id") in self.posts:
            raise DomainError("invalid-value", "post id already used")

    def mutate_create_post(self, event: LedgerEvent) -> None:
        p = event.payload
        post = WallPost(
            post_id=p["post_id"],
            author=event.actor,
            text=p["text"],
            area_tags=tuple(p.get("area_tags", [])),
            created_at=event.timestamp,
            created_seq=event.seq,
        )
        self.posts[post.post_id] = post
        self.post_order.append(post.post_id)
        self.comments.setdefault(post.post_id, [])
        self._count(event.actor, "unsolicited")

    def check_vote_post(self, event: LedgerEvent) -> None:
        p = event.payload
        self.account(event.actor)
        post = self.posts.get(p.get("post_id"))
        if post is None:
            raise DomainError("unknown-post", f"post {p.get('post_id')!r} does not exist")
        if p.get("direction") not in VOTE_DIRECTIONS:
            raise DomainError("invalid-value", "vote direction must be 'up' or 'down'")
        cost = p.get("cost")
        if not isinstance(cost, int) or isinstance(cost, bool) or cost < 0:
            raise DomainError("invalid-value", "vote cost must be a non-negative integer")
        if post.author == event.actor:
            raise DomainError("self-vote", "authors cannot vote on their own posts")
        if (event.actor, post.post_id) in self.votes:
            raise DomainError("duplicate-vote", f"already voted on {post.post_id!r}")
        if self.balance(event.actor, CONTEXT) < cost:
            raise DomainError(
                "insufficient-tokens",
                f"voting costs {cost} context, balance is {self.balance(event.actor, CONTEXT)}",
            )

    def mutate_vote_post(self, event: LedgerEvent) -> None:
        # The burn and the counter update are one event, hence atomic.
        p = event.payload
        post = self.posts[p["post_id"]]
        cost = p["cost"]
        if cost:
            self._debit(event.actor, CONTEXT, cost)
            self.context_burned += cost
        if p["direction"] == "up":
            post.up_votes += 1
        else:
            post.down_votes += 1
        self.votes[(event.actor, post.post_id)] = Vote(
            voter=event.actor, post_id=post.post_id, direction=p["direction"], cost_paid=cost
        )

    def check_comment_post(self, event: LedgerEvent) -> None:
        p = event.payload
        self.account(event.actor)
        _require_id(p, "comment_id")
        if p.get("post_id") not in self.posts:
            raise DomainError("unknown-post", f"post {p.get('post_id')!r} does not exist")
        text = p.get("text")
        if not isinstance(text, str) or not text.strip():
            raise DomainError("empty-text", "comment text must be non-empty")

    def mutate_comment_post(self, event: LedgerEvent) -> None:
        p = event.payload
        self.comments[p["post_id"]].append(
            PostComment(
                comment_id=p["comment_id"],
                post_id=p["post_id"],
                author=event.actor,
                text=p["text"],
                created_at=event.timestamp,
            )
        )

    def check_direct_message(self, event: LedgerEvent) -> None:
        p = event.payload
        self.account(event.actor)
        _require_id(p, "message_id")
        self.account(p.get("to", ""))
        text = p.get("text")
        if not isinstance(text, str) or not text.strip():
            raise DomainError("empty-text", "message text must be non-empty")

    def mutate_direct_message(self, event: LedgerEvent) -> None:
        p = event.payload
        self.messages.append(
            DirectMessage(
                message_id=p["message_id"],
                sender=event.actor,
                recipient=p["to"],
                text=p["text"],
                sent_at=event.timestamp,
            )
        )

    # -- Navigate ----------------------------------------------------------------

    def check_navigate(self, event: LedgerEvent) -> None:
        self.account(event.actor)
        if event.payload.get("view") not in NAV_VIEWS:
            raise DomainError("unknown-view", f"view must be one of {NAV_VIEWS}")

    def mutate_navigate(self, event: LedgerEvent) -> None:
        self._count(event.actor, "nav_" + event.payload["view"])

    # -- ConfigChange --------------------------------------------------------------

    def check_config_change(self, event: LedgerEvent) -> None:
        p = event.payload
        change = p.get("change")
        if change == "genesis":
            if self.money_supply is not None:
                raise DomainError("already-initialized", "genesis has already run")
            supply = p.get("money_supply")
            if not isinstance(supply, int) or isinstance(supply, bool) or supply <= 0:
                raise DomainError("invalid-supply", "money supply must be a positive integer")
        elif change == "policy":
            policy = IncentivePolicy.from_payload(p)
            policy.validate()
        elif change == "assign_cohort":
            self.account(p.get("account", ""))
            if p.get("cohort") not in self.policies:
                raise DomainError("unknown-cohort", f"cohort {p.get('cohort')!r} has no policy")
        elif change == "tags":
            tags = p.get("tags")
            if not isinstance(tags, list) or any(not isinstance(t, str) or not t.strip() for t in tags):
                raise DomainError("invalid-value", "tags must be non-empty strings")
            if len(set(tags)) != len(tags):
                raise DomainError("invalid-value", "duplicate tag in vocabulary")
        elif change == "question_active":
            if p.get("question_id") not in self.questions:
                raise DomainError("unknown-question", f"question {p.get('question_id')!r} does not exist")
            if not isinstance(p.get("active"), bool):
                raise DomainError("invalid-value", "active must be a boolean")
        else:
            raise DomainError("invalid-value", f"unknown config change {change!r}")

    def mutate_config_change(self, event: LedgerEvent) -> None:
        p = event.payload
        change = p["change"]
        if change == "genesis":
            self.money_supply = p["money_supply"]
            self.balances[TREASURY_ADDRESS] = {MONEY: p["money_supply"], CONTEXT: 0}
        elif change == "policy":
            policy = IncentivePolicy.from_payload(p).normalized()
            self.policies[policy.cohort_id] = policy
        elif change == "assign_cohort":
            self.accounts[p["account"]].cohort = p["cohort"]
        elif change == "tags":
            self.area_tags = tuple(p["tags"])
        elif change == "question_active":
            question = self.questions[p["question_id"]]
            self.questions[p["question_id"]] = Question(
                question_id=question.question_id,
                prompt=question.prompt,
                qtype=question.qtype,
                options=question.options,
                likert_points=question.likert_points,
                single_group_start=question.single_group_start,
                active=p["active"],
            )

    # -- dispatch -------------------------------------------------------------------

    def check(self, event: LedgerEvent) -> None:
        kind_check, _ = _HANDLERS[event.kind]
        kind_check(self, event)

    def apply(self, event: LedgerEvent) -> None:
        """Check then mutate; callers on the live path have already checked."""
        if event.seq != self.applied_seq + 1:
            raise ReplayDivergence(event.seq, f"expected seq {self.applied_seq + 1}")
        try:
            kind_check, kind_mutate = _HANDLERS[event.kind]
        except KeyError:
            raise ReplayDivergence(event.seq, f"unknown kind {event.kind!r}") from None
        try:
            kind_check(self, event)
        except DomainError as exc:
            raise ReplayDivergence(event.seq, f"{exc.code}: {exc.message}") from exc
        kind_mutate(self, event)
        self.applied_seq = event.seq

    def mutate_unchecked(self, event: LedgerEvent) -> None:
        """Fast path for the live writer: the check already ran pre-append."""
        _, kind_mutate = _HANDLERS[event.kind]
        kind_mutate(self, event)
        self.applied_seq = event.seq

    # -- snapshots ---------------------------------------------------------------------

    def snapshot_dict(self) -> dict:
        """Canonical JSON-able dump of the whole state, key-sorted downstream."""
        return {
            "applied_seq": self.applied_seq,
            "money_supply": self.money_supply,
            "accounts": {
                a.address: {
                    "role": a.role,
                    "cohort": a.cohort,
                    "user_class": a.user_class,
                    "login_key_hash": a.login_key_hash,
                    "registered_seq": a.registered_seq,
                }
                for a in self.accounts.values()
            },
            "balances": {addr: dict(tokens) for addr, tokens in self.balances.items()},
            "context_minted": self.context_minted,
            "context_burned": self.context_burned,
            "earned_context": dict(self.earned_context),
            "last_earn_seq": dict(self.last_earn_seq),
            "policies": {c: p.to_payload() for c, p in self.policies.items()},
            "area_tags": list(self.area_tags),
            "questions": [self.questions[qid].to_payload() for qid in self.question_order],
            "answers": {
                a.answer_id: {
                    "question_id": a.question_id,
                    "account": a.account,
                    "qtype": a.qtype,
                    "selections": list(a.selections),
                    "likert_value": a.likert_value,
                    "free_text": a.free_text,
                    "timestamp": a.timestamp,
                    "first_seq": a.first_seq,
                }
                for a in self.answers.values()
            },
            "contexts": {
                c.context_id: {
                    "answer_id": c.answer_id,
                    "account": c.account,
                    "ctype": c.ctype,
                    "rating": c.rating,
                    "text": c.text,
                    "timestamp": c.timestamp,
                }
                for c in self.contexts.values()
            },
            "posts": [
                {
                    "post_id": post.post_id,
                    "author": post.author,
                    "text": post.text,
                    "area_tags": list(post.area_tags),
                    "created_at": post.created_at,
                    "created_seq": post.created_seq,
                    "up_votes": post.up_votes,
                    "down_votes": post.down_votes,
                }
                for post in (self.posts[pid] for pid in self.post_order)
            ],
            "votes": {
                f"{voter}|{post_id}": {"direction": v.direction, "cost_paid": v.cost_paid}
                for (voter, post_id), v in self.votes.items()
            },
            "comments": {
                pid: [
                    {
                        "comment_id": c.comment_id,
                        "author": c.author,
                        "text": c.text,
                        "created_at": c.created_at,
                    }
                    for c in items
                ]
                for pid, items in self.comments.items()
            },
            "messages": [
                {
                    "message_id": m.message_id,
                    "sender": m.sender,
                    "recipient": m.recipient,
                    "text": m.text,
                    "sent_at": m.sent_at,
                }
                for m in self.messages
            ],
            "interactions": {addr: dict(cats) for addr, cats in self.interactions.items()},
        }

    def canonical_snapshot(self) -> bytes:
        return json.dumps(
            self.snapshot_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False
        ).encode("utf-8")

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_snapshot()).hexdigest()


_HANDLERS = {
    "Register": (ApplicationState.check_register, ApplicationState.mutate_register),
    "CreateQuestion": (ApplicationState.check_create_question, ApplicationState.mutate_create_question),
    "Answer": (ApplicationState.check_answer, ApplicationState.mutate_answer),
    "Contextualize": (ApplicationState.check_contextualize, ApplicationState.mutate_contextualize),
    "MintToken": (ApplicationState.check_mint_token, ApplicationState.mutate_mint_token),
    "TransferToken": (ApplicationState.check_transfer_token, ApplicationState.mutate_transfer_token),
    "BurnToken": (ApplicationState.check_burn_token, ApplicationState.mutate_burn_token),
    "CreatePost": (ApplicationState.check_create_post, ApplicationState.mutate_create_post),
    "VotePost": (ApplicationState.check_vote_post, ApplicationState.mutate_vote_post),
    "CommentPost": (ApplicationState.check_comment_post, ApplicationState.mutate_comment_post),
    "DirectMessage": (ApplicationState.check_direct_message, ApplicationState.mutate_direct_message),
    "Navigate": (ApplicationState.check_navigate, ApplicationState.mutate_navigate),
    "ConfigChange": (ApplicationState.check_config_change, ApplicationState.mutate_config_change),
}


def replay(events) -> ApplicationState:
    """Rebuild state from scratch; identical logs yield identical digests."""
    state = ApplicationState()
    for event in events:
        state.apply(event)
    return state


def write_snapshot(state: ApplicationState, path) -> None:
    from pathlib import Path

    data = {
        "covers_seq": state.applied_seq,
        "digest": state.digest(),
        "state": state.snapshot_dict(),
    }
    Path(path).write_text(
        json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False),
        encoding="utf-8",
    )


def read_snapshot(path) -> dict:
    from pathlib import Path

    return json.loads(Path(path).read_text(encoding="utf-8"))


def state_from_snapshot(data: dict) -> ApplicationState:
    """Rebuild a state object from a snapshot file's ``state`` section.

    Dict insertion orders may differ from the original live state; digests
    are unaffected because canonical serialization sorts keys.
    """
    s = data["state"] if "state" in data else data
    state = ApplicationState()
    state.applied_seq = s["applied_seq"]
    state.money_supply = s["money_supply"]
    for address, a in s["accounts"].items():
        state.accounts[address] = Account(
            address=address,
            role=a["role"],
            cohort=a["cohort"],
            user_class=a["user_class"],
            login_key_hash=a["login_key_hash"],
            registered_seq=a["registered_seq"],
        )
    state.balances = {addr: dict(tokens) for addr, tokens in s["balances"].items()}
    state.context_minted = s["context_minted"]
    state.context_burned = s["context_burned"]
    state.earned_context = dict(s["earned_context"])
    state.last_earn_seq = dict(s["last_earn_seq"])
    state.policies = {c: IncentivePolicy.from_payload(p) for c, p in s["policies"].items()}
    state.area_tags = tuple(s["area_tags"])
    for q in s["questions"]:
        question = Question.from_payload(q)
        state.questions[question.question_id] = question
        state.question_order.append(question.question_id)
        state.answers_by_question.setdefault(question.question_id, [])
    answers = sorted(s["answers"].items(), key=lambda item: item[1]["first_seq"])
    for answer_id, a in answers:
        record = AnswerRecord(
            answer_id=answer_id,
            question_id=a["question_id"],
            account=a["account"],
            qtype=a["qtype"],
            selections=tuple(a["selections"]),
            likert_value=a["likert_value"],
            free_text=a["free_text"],
            timestamp=a["timestamp"],
            first_seq=a["first_seq"],
        )
        state.answers[answer_id] = record
        state.answer_by_pair[(record.account, record.question_id)] = answer_id
        state.answers_by_question[record.question_id].append(answer_id)
    for context_id, c in s["contexts"].items():
        record = Contextualization(
            context_id=context_id,
            answer_id=c["answer_id"],
            account=c["account"],
            ctype=c["ctype"],
            rating=c["rating"],
            text=c["text"],
            timestamp=c["timestamp"],
        )
        state.contexts[context_id] = record
        state.context_by_answer.setdefault(record.answer_id, {})[record.ctype] = context_id
    for p in s["posts"]:
        post = WallPost(
            post_id=p["post_id"],
            author=p["author"],
            text=p["text"],
            area_tags=tuple(p["area_tags"]),
            created_at=p["created_at"],
            created_seq=p["created_seq"],
            up_votes=p["up_votes"],
            down_votes=p["down_votes"],
        )
        state.posts[post.post_id] = post
        state.post_order.append(post.post_id)
        state.comments.setdefault(post.post_id, [])
    for key, v in s["votes"].items():
        voter, post_id = key.rsplit("|", 1)
        state.votes[(voter, post_id)] = Vote(
            voter=voter, post_id=post_id, direction=v["direction"], cost_paid=v["cost_paid"]
        )
    for post_id, items in s["comments"].items():
        state.comments[post_id] = [
            PostComment(
                comment_id=c["comment_id"],
                post_id=post_id,
                author=c["author"],
                text=c["text"],
                created_at=c["created_at"],
            )
            for c in items
        ]
    state.messages = [
        DirectMessage(
            message_id=m["message_id"],
            sender=m["sender"],
            recipient=m["recipient"],
            text=m["text"],
            sent_at=m["sent_at"],
        )
        for m in s["messages"]
    ]
    state.interactions = {addr: dict(cats) for addr, cats in s["interactions"].items()}
    return state
