"""Command facade: the one write path shared by HTTP, CLI and simulation.

Each command validates against current state, appends the event(s), then
applies them. Mutations are serialized by a single lock, so concurrent
callers (e.g. racing duplicate votes) resolve to exactly one winner.
Reward events ride in the same critical section as their trigger.
"""

from __future__ import annotations

import hashlib
import secrets
import threading
from decimal import Decimal

from . import incentives
from .errors import DomainError
from .eventlog import EventStore, LedgerEvent, VerificationReport
from .incentives import IncentivePolicy
from .questions import Question, question_from_spec, validate_answer_body
from .state import (
    ApplicationState,
    AnswerRecord,
    Contextualization,
    ROLE_ADMIN,
    ROLE_USER,
    TREASURY_ADDRESS,
    replay,
)
from .tokens import CONTEXT, MONEY, chf_value
from .wall import DirectMessage, PostComment, WallPost, ranked_wall


def hash_access_key(key: str) -> str:
    return hashlib.sha256(key.encode("utf-8")).hexdigest()


class RewardNote:
    """What the incentive engine did (or failed to do) for one action."""

    __slots__ = ("granted", "token", "amount", "failure")

    def __init__(self, granted: bool, token: str | None = None, amount: int = 0, failure: str | None = None):
        self.granted = granted
        self.token = token
        self.amount = amount
        self.failure = failure

    def as_dict(self) -> dict:
        return {
            "granted": self.granted,
            "token": self.token,
            "amount": self.amount,
            "failure": self.failure,
        }


NO_REWARD = RewardNote(granted=False)


class FeedbackPlatform:
    """Event-sourced feedback service around a single EventStore."""

    def __init__(self, store: EventStore):
        self.store = store
        self.state: ApplicationState = replay(store.events())
        self._lock = threading.RLock()

    # -- plumbing ------------------------------------------------------------

    def _commit(self, actor: str, kind: str, payload: dict) -> LedgerEvent:
        """Append one pre-checked event and apply it."""
        draft = LedgerEvent(
            seq=self.store.next_seq,
            timestamp=0,
            actor=actor,
            kind=kind,
            payload=payload,
            prev_hash="",
            hash="",
        )
        self.state.check(draft)
        event = self.store.append(actor, kind, payload)
        self.state.mutate_unchecked(event)
        return event

    def verify(self) -> VerificationReport:
        return self.store.verify()

    @property
    def lock(self) -> threading.RLock:
        return self._lock

    # -- initialization --------------------------------------------------------

    def initialize(
        self,
        money_supply: int,
        policies: dict[str, IncentivePolicy] | None = None,
        area_tags: list[str] | None = None,
        admin_address: str = "admin",
        admin_key: str | None = None,
    ) -> None:
        """Genesis: seed supply, policies, tag vocabulary and the admin account."""
        with self._lock:
            if self.state.money_supply is not None:
                raise DomainError("already-initialized", "ledger already has a genesis event")
            self._commit("system", "ConfigChange", {"change": "genesis", "money_supply": money_supply})
            for policy in (policies or incentives.DEFAULT_POLICIES).values():
                policy.validate()
                self._commit("system", "ConfigChange", policy.normalized().to_payload())
            if area_tags:
                self._commit("system", "ConfigChange", {"change": "tags", "tags": list(area_tags)})
            default_cohort = next(iter(self.state.policies))
            self._commit(
                admin_address,
                "Register",
                {
                    "address": admin_address,
                    "role": ROLE_ADMIN,
                    "cohort": default_cohort,
                    "user_class": "user",
                    "login_key_hash": hash_access_key(admin_key) if admin_key else "",
                },
            )

    # -- identity ----------------------------------------------------------------

    def register(
        self,
        pseudonym: str | None = None,
        cohort: str | None = None,
        user_class: str = "user",
        access_key: str | None = None,
    ) -> tuple[str, str]:
        """Create a pseudonymous account; returns (address, access_key).

        The key is returned exactly once; only its hash goes on the ledger.
        """
        with self._lock:
            address = pseudonym if pseudonym else "u" + secrets.token_hex(8)
            key = access_key if access_key else secrets.token_hex(16)
            if cohort is None:
                cohort = "treatment" if "treatment" in self.state.policies else next(iter(self.state.policies), None)
            self._commit(
                address,
                "Register",
                {
                    "address": address,
                    "role": ROLE_USER,
                    "cohort": cohort,
                    "user_class": user_class,
                    "login_key_hash": hash_access_key(key),
                },
            )
            return address, key

    def check_access_key(self, address: str, key: str) -> bool:
        account = self.state.account(address)
        return bool(account.login_key_hash) and account.login_key_hash == hash_access_key(key)

    # -- questions ------------------------------------------------------------------

    def create_question(self, spec: dict, actor: str) -> Question:
        with self._lock:
            question_id = spec.get("question_id") or f"q{self.store.next_seq}"
            question = question_from_spec(spec, question_id)
            self._commit(actor, "CreateQuestion", question.to_payload())
            return self.state.questions[question_id]

    def load_questions(self, specs: list[dict], actor: str) -> list[Question]:
        """All-or-nothing load: any invalid spec rejects the whole batch."""
        with self._lock:
            staged = []
            seen_ids = set(self.state.questions)
            for i, spec in enumerate(specs):
                question_id = spec.get("question_id") or f"q{self.store.next_seq + i}"
                question = question_from_spec(spec, question_id)
                if question_id in seen_ids:
                    raise DomainError("invalid-spec", f"duplicate question id {question_id!r}")
                seen_ids.add(question_id)
                staged.append(question)
            created = []
            for question in staged:
                self._commit(actor, "CreateQuestion", question.to_payload())
                created.append(self.state.questions[question.question_id])
            return created

    def set_question_active(self, question_id: str, active: bool, actor: str) -> None:
        with self._lock:
            self._commit(
                actor,
                "ConfigChange",
                {"change": "question_active", "question_id": question_id, "active": active},
            )

    # -- solicited feedback --------------------------------------------------------------

    def submit_answer(
        self,
        account: str,
        question_id: str,
        selections=None,
        likert_value: int | None = None,
        free_text: str | None = None,
        allow_reanswer: bool = True,
    ) -> tuple[AnswerRecord, RewardNote]:
        with self._lock:
            question = self.state.questions.get(question_id)
            if question is None or not question.active:
                raise DomainError("unknown-question", f"question {question_id!r} is not answerable")
            pair = (account, question_id)
            first_answer = pair not in self.state.answer_by_pair
            if not first_answer and not allow_reanswer:
                raise DomainError("duplicate-answer", f"{account!r} already answered {question_id!r}")
            picks, likert_value, free_text = validate_answer_body(
                question, selections, likert_value, free_text
            )
            answer_id = (
                f"a{self.store.next_seq}" if first_answer else self.state.answer_by_pair[pair]
            )
            payload: dict = {
                "answer_id": answer_id,
                "question_id": question_id,
                "selections": list(picks),
            }
            if likert_value is not None:
                payload["likert_value"] = likert_value
            if free_text is not None:
                payload["free_text"] = free_text
            self._commit(account, "Answer", payload)
            record = self.state.answers[self.state.answer_by_pair[pair]]
            reward = self._reward_answer(account) if first_answer else NO_REWARD
            return record, reward

    def _reward_answer(self, account: str) -> RewardNote:
        policy = self.state.policy_for(account)
        amount = incentives.answer_reward(policy)
        if amount <= 0:
            return NO_REWARD
        if self.state.balance(TREASURY_ADDRESS, MONEY) < amount:
            return RewardNote(granted=False, token=MONEY, amount=amount, failure="treasury-exhausted")
        self._commit(
            TREASURY_ADDRESS,
            "TransferToken",
            {
                "token": MONEY,
                "from": TREASURY_ADDRESS,
                "to": account,
                "amount": amount,
                "reason": "answer-reward",
            },
        )
        return RewardNote(granted=True, token=MONEY, amount=amount)

    def contextualize(
        self,
        account: str,
        answer_id: str,
        ctype: str,
        rating: int | None = None,
        text: str | None = None,
    ) -> tuple[Contextualization, RewardNote]:
        with self._lock:
            payload: dict = {
                "context_id": f"x{self.store.next_seq}",
                "answer_id": answer_id,
                "ctype": ctype,
            }
            if rating is not None:
                payload["rating"] = rating
            if text is not None:
                payload["text"] = text
            self._commit(account, "Contextualize", payload)
            record = self.state.contexts[payload["context_id"]]
            policy = self.state.policy_for(account)
            amount = incentives.contextualization_reward(policy)
            if amount <= 0:
                return record, NO_REWARD
            self._commit(
                "system",
                "MintToken",
                {
                    "token": CONTEXT,
                    "to": account,
                    "amount": amount,
                    "reason": "contextualization",
                    "context_id": record.context_id,
                },
            )
            return record, RewardNote(granted=True, token=CONTEXT, amount=amount)

    # -- tokens ------------------------------------------------------------------------

    def transfer(self, token: str, sender: str, recipient: str, amount: int, reason: str | None = None) -> None:
        with self._lock:
            payload = {"token": token, "from": sender, "to": recipient, "amount": amount}
            if reason:
                payload["reason"] = reason
            self._commit(sender, "TransferToken", payload)

    def burn_context(self, account: str, amount: int, reason: str | None = None) -> None:
        with self._lock:
            payload = {"token": CONTEXT, "from": account, "amount": amount}
            if reason:
                payload["reason"] = reason
            self._commit(account, "BurnToken", payload)

    def balances_of(self, address: str) -> dict:
        account = self.state.account(address)
        money = self.state.balance(address, MONEY)
        return {
            "address": address,
            "cohort": account.cohort,
            "user_class": account.user_class,
            "money": money,
            "context": self.state.balance(address, CONTEXT),
            "context_earned": self.state.earned_context.get(address, 0),
            "redeemable_chf": chf_value(money),
        }

    def redeemable_value(self, address: str) -> Decimal:
        self.state.account(address)
        return chf_value(self.state.balance(address, MONEY))

    # -- wall -----------------------------------------------------------------------------

    def create_post(self, account: str, text: str, area_tags: list[str] | None = None) -> WallPost:
        with self._lock:
            payload = {
                "post_id": f"p{self.store.next_seq}",
                "text": text,
                "area_tags": sorted(area_tags or []),
            }
            self._commit(account, "CreatePost", payload)
            return self.state.posts[payload["post_id"]]

    def cast_vote(self, account: str, post_id: str, direction: str) -> WallPost:
        with self._lock:
            cost = incentives.vote_cost(self.state.policy_for(account))
            self._commit(account, "VotePost", {"post_id": post_id, "direction": direction, "cost": cost})
            return self.state.posts[post_id]

    def add_comment(self, account: str, post_id: str, text: str) -> PostComment:
        with self._lock:
            payload = {"comment_id": f"c{self.store.next_seq}", "post_id": post_id, "text": text}
            self._commit(account, "CommentPost", payload)
            return self.state.comments[post_id][-1]

    def send_message(self, sender: str, recipient: str, text: str) -> DirectMessage:
        with self._lock:
            payload = {"message_id": f"m{self.store.next_seq}", "to": recipient, "text": text}
            self._commit(sender, "DirectMessage", payload)
            return self.state.messages[-1]

    def messages_between(self, requester: str, address_a: str, address_b: str) -> list[DirectMessage]:
        """Thread between two accounts; only its participants may read it."""
        self.state.account(requester)
        if requester not in (address_a, address_b):
            raise DomainError("message-access-denied", "direct messages are private to their parties")
        participants = {address_a, address_b}
        return [m for m in self.state.messages if {m.sender, m.recipient} == participants]

    def inbox(self, address: str) -> list[DirectMessage]:
        self.state.account(address)
        return [m for m in self.state.messages if m.recipient == address or m.sender == address]

    def ranked_wall(self) -> list[WallPost]:
        return ranked_wall(self.state.posts.values())

    def vote_cost_for(self, account: str) -> int:
        return incentives.vote_cost(self.state.policy_for(account))

    # -- navigation / config ------------------------------------------------------------------

    def navigate(self, account: str, view: str) -> None:
        with self._lock:
            self._commit(account, "Navigate", {"view": view})

    def set_policy(self, policy: IncentivePolicy, actor: str) -> IncentivePolicy:
        with self._lock:
            policy.validate()
            self._commit(actor, "ConfigChange", policy.normalized().to_payload())
            return self.state.policies[policy.cohort_id]

    def assign_cohort(self, address: str, cohort: str, actor: str) -> None:
        with self._lock:
            self._commit(actor, "ConfigChange", {"change": "assign_cohort", "account": address, "cohort": cohort})

    def set_area_tags(self, tags: list[str], actor: str) -> None:
        with self._lock:
            self._commit(actor, "ConfigChange", {"change": "tags", "tags": list(tags)})

    def is_admin(self, address: str) -> bool:
        account = self.state.accounts.get(address)
        return account is not None and account.role == ROLE_ADMIN
