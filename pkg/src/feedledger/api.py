"""HTTP surface: identity, questions, wall, statistics, admin.

Every mutating request appends exactly one user-visible event (plus any
reward events the incentive engine decides on) inside the platform's
single-writer critical section; failed requests append nothing. Responses
are computed from committed state only. Domain errors surface as
``{code, message}`` with a status from the table below.
"""

from __future__ import annotations

import secrets
import time
from dataclasses import dataclass

from fastapi import Depends, FastAPI, Header, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import analytics
from .config import ServiceConfig
from .errors import DomainError, LedgerError
from .incentives import IncentivePolicy
from .platform import FeedbackPlatform
from .state import NAV_VIEWS
from .wall import WallPost

ERROR_STATUS = {
    "invalid-session": 401,
    "bad-credentials": 401,
    "admin-required": 403,
    "foreign-answer": 403,
    "message-access-denied": 403,
    "unknown-account": 404,
    "unknown-question": 404,
    "unknown-post": 404,
    "unknown-answer": 404,
    "pseudonym-taken": 409,
    "duplicate-answer": 409,
    "duplicate-contextualization": 409,
    "duplicate-vote": 409,
    "self-vote": 409,
    "already-initialized": 409,
    "insufficient-balance": 409,
    "insufficient-tokens": 409,
    "config-not-found": 500,
}


def _now_ms() -> int:
    return int(time.time() * 1000)


@dataclass
class Session:
    token: str
    account: str
    issued_at: int
    expires_at: int


class SessionManager:
    """In-memory bearer sessions; one account may hold many."""

    def __init__(self, ttl_minutes: int, clock=None):
        self._ttl_ms = ttl_minutes * 60_000
        self._clock = clock or _now_ms
        self._sessions: dict[str, Session] = {}

    def issue(self, account: str) -> Session:
        now = self._clock()
        session = Session(
            token=secrets.token_urlsafe(24),
            account=account,
            issued_at=now,
            expires_at=now + self._ttl_ms,
        )
        self._sessions[session.token] = session
        return session

    def resolve(self, token: str) -> Session:
        session = self._sessions.get(token)
        if session is None:
            raise DomainError("invalid-session", "session token is unknown")
        if self._clock() >= session.expires_at:
            del self._sessions[session.token]
            raise DomainError("invalid-session", "session has expired")
        return session


# -- request bodies ---------------------------------------------------------


class RegisterBody(BaseModel):
    pseudonym: str | None = None
    cohort: str | None = None
    user_class: str = "user"


class SessionBody(BaseModel):
    address: str
    access_key: str


class AnswerBody(BaseModel):
    selections: list[int] | None = None
    likert_value: int | None = None
    free_text: str | None = None


class ContextBody(BaseModel):
    ctype: str
    rating: int | None = None
    text: str | None = None


class PostBody(BaseModel):
    text: str
    area_tags: list[str] = []


class VoteBody(BaseModel):
    direction: str


class CommentBody(BaseModel):
    text: str


class MessageBody(BaseModel):
    to: str
    text: str


class NavigateBody(BaseModel):
    view: str


class PolicyBody(BaseModel):
    cohort: str
    incentives_enabled: bool = True
    money_per_answer: int = 1
    context_per_contextualization: int = 1
    vote_cost_context: int = 1


class CohortBody(BaseModel):
    account: str
    cohort: str


class QuestionsBody(BaseModel):
    questions: list[dict]


# -- serialization helpers -----------------------------------------------------


def _question_dict(question, answer=None, contextualized=None) -> dict:
    data = {
        "question_id": question.question_id,
        "prompt": question.prompt,
        "qtype": question.qtype,
        "options": list(question.options),
        "likert_points": question.likert_points,
        "single_group_start": question.single_group_start,
        "active": question.active,
    }
    if answer is not None:
        data["answer"] = _answer_dict(answer)
    else:
        data["answer"] = None
    data["contextualized"] = sorted(contextualized or [])
    return data


def _answer_dict(answer) -> dict:
    return {
        "answer_id": answer.answer_id,
        "question_id": answer.question_id,
        "selections": list(answer.selections),
        "likert_value": answer.likert_value,
        "free_text": answer.free_text,
        "timestamp": answer.timestamp,
    }


def _balances_dict(platform: FeedbackPlatform, address: str) -> dict:
    data = platform.balances_of(address)
    data["redeemable_chf"] = str(data["redeemable_chf"])
    return data


def _post_dict(platform: FeedbackPlatform, post: WallPost, viewer: str | None = None) -> dict:
    vote = platform.state.votes.get((viewer, post.post_id)) if viewer else None
    return {
        "post_id": post.post_id,
        "author": post.author,
        "text": post.text,
        "area_tags": list(post.area_tags),
        "created_at": post.created_at,
        "up_votes": post.up_votes,
        "down_votes": post.down_votes,
        "net_score": post.net_score,
        "comments": [
            {
                "comment_id": c.comment_id,
                "author": c.author,
                "text": c.text,
                "created_at": c.created_at,
            }
            for c in platform.state.comments.get(post.post_id, [])
        ],
        "my_vote": vote.direction if vote else None,
    }


def _message_dict(message) -> dict:
    return {
        "message_id": message.message_id,
        "sender": message.sender,
        "recipient": message.recipient,
        "text": message.text,
        "sent_at": message.sent_at,
    }


def create_app(
    platform: FeedbackPlatform, config: ServiceConfig, clock=None
) -> FastAPI:
    app = FastAPI(title="feedledger", docs_url=None, redoc_url=None)
    sessions = SessionManager(config.session_ttl_minutes, clock=clock)
    app.state.platform = platform
    app.state.sessions = sessions
    app.state.config = config

    @app.exception_handler(DomainError)
    def domain_error(request: Request, exc: DomainError):
        status = ERROR_STATUS.get(exc.code, 400)
        return JSONResponse(status_code=status, content={"code": exc.code, "message": exc.message})

    @app.exception_handler(LedgerError)
    def ledger_error(request: Request, exc: LedgerError):
        return JSONResponse(status_code=503, content={"code": exc.code, "message": str(exc)})

    @app.exception_handler(RequestValidationError)
    def body_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"code": "invalid-request", "message": str(exc.errors()[:3])}
        )

    def current_session(authorization: str | None = Header(default=None)) -> Session:
        if not authorization or not authorization.startswith("Bearer "):
            raise DomainError("invalid-session", "missing bearer token")
        token = authorization.removeprefix("Bearer ").strip()
        if config.admin_token and secrets.compare_digest(token, config.admin_token):
            return Session(token=token, account=config.admin_address, issued_at=0, expires_at=2**62)
        return sessions.resolve(token)

    def admin_session(session: Session = Depends(current_session)) -> Session:
        if session.account not in config.admins and not platform.is_admin(session.account):
            raise DomainError("admin-required", "this endpoint requires an admin account")
        return session

    # -- identity --------------------------------------------------------

    @app.post("/register")
    def register(body: RegisterBody):
        address, key = platform.register(
            pseudonym=body.pseudonym,
            cohort=body.cohort or config.default_cohort,
            user_class=body.user_class,
        )
        session = sessions.issue(address)
        policy = platform.state.policy_for(address)
        return {
            "address": address,
            "access_key": key,
            "cohort": platform.state.account(address).cohort,
            "incentives_enabled": policy.incentives_enabled,
            "session": {"token": session.token, "expires_at": session.expires_at},
        }

    @app.post("/session")
    def open_session(body: SessionBody):
        if not platform.check_access_key(body.address, body.access_key):
            raise DomainError("bad-credentials", "address and access key do not match")
        session = sessions.issue(body.address)
        return {"token": session.token, "expires_at": session.expires_at}

    # -- questions ----------------------------------------------------------

    @app.get("/questions")
    def list_questions(session: Session = Depends(current_session)):
        state = platform.state
        rows = []
        for question_id in state.question_order:
            question = state.questions[question_id]
            if not question.active:
                continue
            answer_id = state.answer_by_pair.get((session.account, question_id))
            answer = state.answers.get(answer_id) if answer_id else None
            contextualized = (
                state.context_by_answer.get(answer_id, {}).keys() if answer_id else ()
            )
            rows.append(_question_dict(question, answer, contextualized))
        return {"questions": rows}

    @app.post("/questions/{question_id}/answer")
    def answer_question(question_id: str, body: AnswerBody, session: Session = Depends(current_session)):
        record, reward = platform.submit_answer(
            session.account,
            question_id,
            selections=body.selections,
            likert_value=body.likert_value,
            free_text=body.free_text,
            allow_reanswer=config.allow_reanswer,
        )
        return {
            "answer": _answer_dict(record),
            "reward": reward.as_dict(),
            "balances": _balances_dict(platform, session.account),
        }

    @app.post("/answers/{answer_id}/context")
    def contextualize(answer_id: str, body: ContextBody, session: Session = Depends(current_session)):
        record, reward = platform.contextualize(
            session.account, answer_id, body.ctype, rating=body.rating, text=body.text
        )
        return {
            "contextualization": {
                "context_id": record.context_id,
                "answer_id": record.answer_id,
                "ctype": record.ctype,
                "rating": record.rating,
                "text": record.text,
            },
            "reward": reward.as_dict(),
            "balances": _balances_dict(platform, session.account),
        }

    # -- wall ------------------------------------------------------------------

    @app.get("/wall")
    def wall(session: Session = Depends(current_session)):
        posts = platform.ranked_wall()
        return {
            "posts": [_post_dict(platform, post, viewer=session.account) for post in posts],
            "vote_cost": platform.vote_cost_for(session.account),
            "area_tags": list(platform.state.area_tags),
        }

    @app.post("/wall")
    def create_post(body: PostBody, session: Session = Depends(current_session)):
        post = platform.create_post(session.account, body.text, body.area_tags)
        return {"post": _post_dict(platform, post, viewer=session.account)}

    @app.post("/wall/{post_id}/vote")
    def vote(post_id: str, body: VoteBody, session: Session = Depends(current_session)):
        post = platform.cast_vote(session.account, post_id, body.direction)
        return {
            "post": _post_dict(platform, post, viewer=session.account),
            "balances": _balances_dict(platform, session.account),
        }

    @app.post("/wall/{post_id}/comment")
    def comment(post_id: str, body: CommentBody, session: Session = Depends(current_session)):
        record = platform.add_comment(session.account, post_id, body.text)
        return {
            "comment": {
                "comment_id": record.comment_id,
                "post_id": record.post_id,
                "author": record.author,
                "text": record.text,
                "created_at": record.created_at,
            }
        }

    # -- direct messages ----------------------------------------------------------

    @app.post("/messages")
    def send_message(body: MessageBody, session: Session = Depends(current_session)):
        message = platform.send_message(session.account, body.to, body.text)
        return {"message": _message_dict(message)}

    @app.get("/messages")
    def my_messages(session: Session = Depends(current_session)):
        return {"messages": [_message_dict(m) for m in platform.inbox(session.account)]}

    @app.get("/messages/{other}")
    def thread(other: str, session: Session = Depends(current_session)):
        messages = platform.messages_between(session.account, session.account, other)
        return {"messages": [_message_dict(m) for m in messages]}

    # -- statistics ------------------------------------------------------------------

    @app.get("/stats/me")
    def stats_me(session: Session = Depends(current_session)):
        return _balances_dict(platform, session.account)

    @app.get("/stats/leaderboard")
    def stats_leaderboard(
        top: int = Query(default=0, ge=0), session: Session = Depends(current_session)
    ):
        entries = analytics.leaderboard(platform.state, top or config.leaderboard_size)
        return {
            "entries": [
                {
                    "rank": e.rank,
                    "account": e.account,
                    "context_tokens_earned": e.context_tokens_earned,
                }
                for e in entries
            ]
        }

    @app.get("/stats/reports/interactions")
    def report_interactions(
        cohort: str = "all",
        user_class: str = "all",
        session: Session = Depends(current_session),
    ):
        rows = analytics.interaction_report(platform.state, cohort=cohort, user_class=user_class)
        return {
            "rows": [
                {
                    "category": r.category,
                    "cohort": r.cohort,
                    "user_class": r.user_class,
                    "total": r.total,
                    "mean_per_participant": str(r.mean_per_participant),
                }
                for r in rows
            ]
        }

    @app.get("/stats/reports/contextualization")
    def report_contextualization(session: Session = Depends(current_session)):
        rows = analytics.contextualization_percentage(platform.state)
        return {
            "rows": [
                {
                    "qtype": r.qtype,
                    "answers": r.answers,
                    "pct_satisfaction": str(r.pct_satisfaction),
                    "pct_importance": str(r.pct_importance),
                    "pct_comment": str(r.pct_comment),
                }
                for r in rows
            ]
        }

    @app.get("/stats/reports/differentiated/{question_id}")
    def report_differentiated(
        question_id: str,
        min_importance: int = Query(default=0, ge=0),  # above the 0..4 scale: empty result
        session: Session = Depends(current_session),
    ):
        dist = analytics.differentiated_answers(platform.state, question_id, min_importance)
        return {
            "question_id": dist.question_id,
            "min_importance": dist.min_importance,
            "total": dist.total,
            "counts": {str(k): v for k, v in sorted(dist.counts.items())},
        }

    # -- static / telemetry ----------------------------------------------------------

    @app.get("/about")
    def about():
        return {
            "app": config.about_text,
            "netiquette": config.netiquette,
            "area_tags": list(platform.state.area_tags),
        }

    @app.post("/events/navigate")
    def navigate(body: NavigateBody, session: Session = Depends(current_session)):
        platform.navigate(session.account, body.view)
        return {"ok": True, "views": list(NAV_VIEWS)}

    @app.get("/health")
    def health():
        return {"status": "ok", "events": platform.store.next_seq}

    # -- admin ------------------------------------------------------------------------

    @app.post("/admin/questions")
    def admin_questions(body: QuestionsBody, session: Session = Depends(admin_session)):
        created = platform.load_questions(body.questions, actor=session.account)
        return {"created": [q.question_id for q in created]}

    @app.post("/admin/policy")
    def admin_policy(body: PolicyBody, session: Session = Depends(admin_session)):
        policy = platform.set_policy(
            IncentivePolicy(
                cohort_id=body.cohort,
                incentives_enabled=body.incentives_enabled,
                money_per_answer=body.money_per_answer,
                context_per_contextualization=body.context_per_contextualization,
                vote_cost_context=body.vote_cost_context,
            ),
            actor=session.account,
        )
        return {"policy": policy.to_payload()}

    @app.post("/admin/cohort")
    def admin_cohort(body: CohortBody, session: Session = Depends(admin_session)):
        platform.assign_cohort(body.account, body.cohort, actor=session.account)
        return {"account": body.account, "cohort": body.cohort}

    @app.get("/admin/export")
    def admin_export(report: str, session: Session = Depends(admin_session)):
        if report == "interactions":
            text = analytics.interaction_report_csv(analytics.interaction_report(platform.state))
        elif report == "contextualization":
            text = analytics.contextualization_csv(
                analytics.contextualization_percentage(platform.state)
            )
        elif report == "leaderboard":
            text = analytics.leaderboard_csv(analytics.leaderboard(platform.state))
        else:
            raise DomainError("invalid-value", f"unknown report {report!r}")
        return Response(content=text, media_type="text/csv")

    @app.get("/admin/ledger/verify")
    def admin_verify(session: Session = Depends(admin_session)):
        report = platform.verify()
        return {"ok": report.ok, "first_bad_seq": report.first_bad_seq, "checked": report.checked}

    return app
