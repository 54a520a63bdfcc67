"""Deterministic synthetic load for fixtures and integration tests.

Given the same plan and seed, two runs produce byte-identical ledgers:
the store clock is a fixed-step counter, account keys and all sampling
come from one seeded RNG, and every operation goes through the regular
platform command path.

The ``fieldstudy`` plan reproduces the interaction volumes recorded in a
four-day deployment with 132 participants: 21286 answers across the eight
question types, 55 wall posts, 6018/5692/2107 importance/satisfaction/
comment contextualizations, and the per-view navigation counts. Per-type
contextualization counts are pinned so that both the per-type rates and
the grand totals match the recorded table at three decimals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .incentives import DEFAULT_POLICIES
from .platform import FeedbackPlatform
from .questions import CTYPE_COMMENT, CTYPE_IMPORTANCE, CTYPE_SATISFACTION, QTYPES
from .tokens import CONTEXT

SIM_EPOCH_MS = 1_632_096_000_000  # fixed start so ledgers are reproducible
SIM_STEP_MS = 200

# users split into (cohort, user_class) groups at these weights
GROUP_WEIGHTS = (
    ("control", "user", 18),
    ("treatment", "user", 54),
    ("control", "unaware-user", 15),
    ("treatment", "unaware-user", 45),
)

FIELDSTUDY_USERS = 132

FIELDSTUDY_ANSWERS = {
    "choice-multiple": 1704,
    "choice-multiple-single": 1324,
    "choice-multiple-single-text": 918,
    "choice-multiple-text": 952,
    "choice-single": 8363,
    "choice-single-text": 668,
    "likert": 3531,
    "text-input": 3826,
}

# (satisfaction, importance, comment) per question type; totals 5692/6018/2107
FIELDSTUDY_CONTEXTS = {
    "choice-multiple": (494, 513, 211),
    "choice-multiple-single": (360, 379, 117),
    "choice-multiple-single-text": (237, 267, 67),
    "choice-multiple-text": (245, 255, 65),
    "choice-single": (2200, 2304, 762),
    "choice-single-text": (181, 180, 64),
    "likert": (953, 1012, 449),
    "text-input": (1022, 1108, 372),
}

FIELDSTUDY_NAVIGATIONS = {
    "question": 6990,
    "statistics": 3605,
    "open_feedback": 3094,
    "about": 549,
}

FIELDSTUDY_POSTS = 55

_POST_TOPICS = (
    "Open the reading room earlier on weekends",
    "More power sockets near the group tables",
    "Extend loan periods during exam weeks",
    "Quiet zone signage is easy to miss",
    "Add a water fountain on the second floor",
    "The search interface should remember filters",
)


@dataclass
class SimulationPlan:
    users: int
    answers_per_qtype: dict = field(default_factory=dict)
    contexts_per_qtype: dict = field(default_factory=dict)  # qtype -> (sat, imp, com)
    navigations: dict = field(default_factory=dict)
    posts: int = 0
    votes: int = 0
    comments: int = 0
    messages: int = 0
    genesis_supply: int = 1_000_000

    def questions_per_qtype(self) -> dict:
        per_user_cap = {}
        for qtype, count in self.answers_per_qtype.items():
            per_user_cap[qtype] = max(1, -(-count // max(self.users, 1)))
        return per_user_cap


def split_groups(users: int) -> list[tuple[str, str, int]]:
    """Largest-remainder split of ``users`` over the cohort/class groups."""
    total_weight = sum(w for _, _, w in GROUP_WEIGHTS)
    exact = [(c, k, users * w / total_weight) for c, k, w in GROUP_WEIGHTS]
    counts = [int(x) for _, _, x in exact]
    remainders = sorted(
        range(len(exact)), key=lambda i: (exact[i][2] - counts[i]), reverse=True
    )
    short = users - sum(counts)
    for i in remainders[:short]:
        counts[i] += 1
    return [(c, k, n) for (c, k, _), n in zip(exact, counts)]


def fieldstudy_plan(users: int = FIELDSTUDY_USERS) -> SimulationPlan:
    return SimulationPlan(
        users=users,
        answers_per_qtype=dict(FIELDSTUDY_ANSWERS),
        contexts_per_qtype=dict(FIELDSTUDY_CONTEXTS),
        navigations=dict(FIELDSTUDY_NAVIGATIONS),
        posts=FIELDSTUDY_POSTS,
        votes=120,
        comments=40,
        messages=12,
    )


def uniform_plan(users: int) -> SimulationPlan:
    """A small balanced workload that scales with the user count."""
    answers = {qtype: max(users, (users * 14) // 10) for qtype in QTYPES}
    contexts = {
        qtype: (answers[qtype] // 3, answers[qtype] // 3, answers[qtype] // 6)
        for qtype in QTYPES
    }
    return SimulationPlan(
        users=users,
        answers_per_qtype=answers,
        contexts_per_qtype=contexts,
        navigations={"question": users * 2, "statistics": users, "open_feedback": users, "about": users // 2},
        posts=max(2, users // 3),
        votes=users,
        comments=users // 2,
        messages=users // 4,
    )


def make_clock(start_ms: int = SIM_EPOCH_MS, step_ms: int = SIM_STEP_MS):
    state = {"now": start_ms}

    def clock() -> int:
        state["now"] += step_ms
        return state["now"]

    return clock


def _answer_body(rng: random.Random, question) -> dict:
    qtype = question.qtype
    n = len(question.options)
    body: dict = {}
    if qtype in ("choice-single", "choice-single-text"):
        body["selections"] = [rng.randrange(n)]
    elif qtype in ("choice-multiple", "choice-multiple-text"):
        k = rng.randint(1, min(3, n))
        body["selections"] = rng.sample(range(n), k)
    elif qtype in ("choice-multiple-single", "choice-multiple-single-text"):
        split = question.single_group_start
        k = rng.randint(1, min(2, split))
        picks = rng.sample(range(split), k)
        picks.append(rng.randrange(split, n))
        body["selections"] = picks
    elif qtype == "likert":
        body["likert_value"] = rng.randrange(question.likert_points)
    if qtype == "text-input":
        body["free_text"] = f"Observation {rng.randrange(10_000)}: the service details matter."
    elif qtype.endswith("-text") and rng.random() < 0.3:
        body["free_text"] = f"Additional note {rng.randrange(10_000)}."
    return body


def run_simulation(platform: FeedbackPlatform, plan: SimulationPlan, seed: int) -> dict:
    """Drive the platform through the plan; returns a small summary."""
    rng = random.Random(seed)

    if platform.state.money_supply is None:
        platform.initialize(
            money_supply=plan.genesis_supply,
            policies=dict(DEFAULT_POLICIES),
            area_tags=["opening-hours", "collections", "digital-services", "facilities"],
        )
    admin = next(
        a.address for a in platform.state.accounts.values() if a.role == "admin"
    )

    users: list[str] = []
    for cohort, user_class, count in split_groups(plan.users):
        for _ in range(count):
            address = f"user{len(users) + 1:04d}"
            key = f"{rng.getrandbits(128):032x}"
            platform.register(
                pseudonym=address, cohort=cohort, user_class=user_class, access_key=key
            )
            users.append(address)

    option_labels = ["Reading rooms", "Lending desk", "Online catalog", "Course support"]
    questions_by_qtype: dict[str, list] = {qtype: [] for qtype in QTYPES}
    for qtype, quota in plan.questions_per_qtype().items():
        if plan.answers_per_qtype.get(qtype, 0) <= 0:
            continue
        for i in range(quota):
            spec: dict = {
                "prompt": f"How do you rate aspect {i + 1} of our {qtype} services?",
                "qtype": qtype,
            }
            if qtype.startswith("choice"):
                spec["options"] = option_labels
                if qtype in ("choice-multiple-single", "choice-multiple-single-text"):
                    spec["single_group_start"] = 2
            elif qtype == "likert":
                spec["likert_points"] = 5
            questions_by_qtype[qtype].append(platform.create_question(spec, actor=admin))

    # answers: user i%U takes question i//U of the type, so pairs never repeat
    answers_by_qtype: dict[str, list] = {qtype: [] for qtype in QTYPES}
    user_count = len(users)
    for qtype, count in plan.answers_per_qtype.items():
        pool = questions_by_qtype[qtype]
        for i in range(count):
            account = users[i % user_count]
            question = pool[i // user_count]
            body = _answer_body(rng, question)
            record, _ = platform.submit_answer(account, question.question_id, **body)
            answers_by_qtype[qtype].append(record)

    for qtype, (n_sat, n_imp, n_com) in plan.contexts_per_qtype.items():
        records = answers_by_qtype[qtype]
        for ctype, quota in (
            (CTYPE_SATISFACTION, n_sat),
            (CTYPE_IMPORTANCE, n_imp),
            (CTYPE_COMMENT, n_com),
        ):
            for index in rng.sample(range(len(records)), quota):
                record = records[index]
                if ctype == CTYPE_COMMENT:
                    platform.contextualize(
                        record.account,
                        record.answer_id,
                        ctype,
                        text=f"Context for {record.answer_id}: option wording could be clearer.",
                    )
                else:
                    platform.contextualize(
                        record.account, record.answer_id, ctype, rating=rng.randint(0, 4)
                    )

    posts = []
    tags = list(platform.state.area_tags)
    for i in range(plan.posts):
        author = users[rng.randrange(user_count)]
        text = f"{_POST_TOPICS[i % len(_POST_TOPICS)]} (report {i + 1})"
        chosen = rng.sample(tags, rng.randint(0, min(2, len(tags)))) if tags else []
        posts.append(platform.create_post(author, text, sorted(chosen)))

    votes_cast = 0
    if posts and plan.votes:
        candidates = [(u, p.post_id, p.author) for u in users for p in posts]
        rng.shuffle(candidates)
        for voter, post_id, author in candidates:
            if votes_cast >= plan.votes:
                break
            if voter == author:
                continue
            cost = platform.vote_cost_for(voter)
            if platform.state.balance(voter, CONTEXT) < cost:
                continue
            direction = "up" if rng.random() < 0.7 else "down"
            platform.cast_vote(voter, post_id, direction)
            votes_cast += 1

    for i in range(plan.comments if posts else 0):
        commenter = users[rng.randrange(user_count)]
        post = posts[rng.randrange(len(posts))]
        platform.add_comment(commenter, post.post_id, f"Agreed, seen this too ({i + 1}).")

    for i in range(plan.messages):
        sender = users[i % user_count]
        recipient = users[(i + 1) % user_count]
        if sender != recipient:
            platform.send_message(sender, recipient, f"Thanks for the tip! ({i + 1})")

    for view, count in plan.navigations.items():
        for i in range(count):
            platform.navigate(users[i % user_count], view)

    platform.store.flush()
    return {
        "users": user_count,
        "questions": sum(len(v) for v in questions_by_qtype.values()),
        "answers": sum(len(v) for v in answers_by_qtype.values()),
        "posts": len(posts),
        "votes": votes_cast,
        "events": platform.store.next_seq,
        "state_digest": platform.state.digest(),
    }
