"""Unsolicited feedback wall: posts, token-funded votes, comments, messages."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

VOTE_UP = "up"
VOTE_DOWN = "down"
VOTE_DIRECTIONS = (VOTE_UP, VOTE_DOWN)


@dataclass
class WallPost:
    post_id: str
    author: str
    text: str
    area_tags: tuple[str, ...]
    created_at: int
    created_seq: int
    up_votes: int = 0
    down_votes: int = 0

    @property
    def net_score(self) -> int:
        return self.up_votes - self.down_votes


@dataclass(frozen=True)
class Vote:
    voter: str
    post_id: str
    direction: str
    cost_paid: int


@dataclass(frozen=True)
class PostComment:
    comment_id: str
    post_id: str
    author: str
    text: str
    created_at: int


@dataclass(frozen=True)
class DirectMessage:
    message_id: str
    sender: str
    recipient: str
    text: str
    sent_at: int


def rank_key(post: WallPost) -> tuple[int, int, int]:
    # Highest net score first; ties newest-first. created_seq breaks exact
    # timestamp collisions so the order is total regardless of input order.
    return (-post.net_score, -post.created_at, -post.created_seq)


def ranked_wall(posts: Iterable[WallPost]) -> list[WallPost]:
    return sorted(posts, key=rank_key)
