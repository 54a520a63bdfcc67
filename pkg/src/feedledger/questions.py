"""Solicited feedback: typed questions, answer shape validation, contextualization.

Eight question types are supported. The plain ones are ``choice-single``
(exactly one option), ``choice-multiple`` (one or more), ``likert`` (a
point on an n-point scale) and ``text-input`` (free text only). ``-text``
variants additionally accept optional free text. The grouped
``choice-multiple-single`` variants split the option list at
``single_group_start``: indices below the split form a pick-one-or-more
group, indices at or above it form a pick-exactly-one group.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError

QTYPES = (
    "choice-single",
    "choice-multiple",
    "choice-multiple-single",
    "choice-multiple-single-text",
    "choice-multiple-text",
    "choice-single-text",
    "likert",
    "text-input",
)

GROUPED_QTYPES = frozenset({"choice-multiple-single", "choice-multiple-single-text"})
CHOICE_QTYPES = frozenset(q for q in QTYPES if q.startswith("choice"))
TEXT_ALLOWED_QTYPES = frozenset(q for q in QTYPES if q.endswith("-text")) | {"text-input"}

CTYPE_IMPORTANCE = "importance"
CTYPE_SATISFACTION = "satisfaction"
CTYPE_COMMENT = "comment"
CTYPES = (CTYPE_IMPORTANCE, CTYPE_SATISFACTION, CTYPE_COMMENT)

RATING_MIN = 0
RATING_MAX = 4


def _invalid(message: str) -> DomainError:
    return DomainError("invalid-spec", message)


def _mismatch(message: str) -> DomainError:
    return DomainError("shape-mismatch", message)


@dataclass(frozen=True)
class Question:
    question_id: str
    prompt: str
    qtype: str
    options: tuple[str, ...] = ()
    likert_points: int = 5
    single_group_start: int | None = None
    active: bool = True

    def validate_spec(self) -> None:
        if self.qtype not in QTYPES:
            raise _invalid(f"unknown question type {self.qtype!r}")
        if not self.prompt or not self.prompt.strip():
            raise _invalid("prompt must be non-empty")
        if any(not isinstance(o, str) or not o.strip() for o in self.options):
            raise _invalid("option labels must be non-empty strings")
        if len(set(self.options)) != len(self.options):
            raise _invalid("option labels must be unique")
        if self.qtype in CHOICE_QTYPES:
            if len(self.options) < 2:
                raise _invalid(f"{self.qtype} needs at least 2 options")
        elif self.qtype == "likert":
            if self.likert_points < 2:
                raise _invalid("likert scale needs at least 2 points")
            if self.options and len(self.options) != self.likert_points:
                raise _invalid("likert point labels must match likert_points")
        elif self.options:
            raise _invalid("text-input takes no options")
        if self.qtype in GROUPED_QTYPES:
            split = self.single_group_start
            if split is None:
                raise _invalid(f"{self.qtype} requires single_group_start")
            if not 1 <= split < len(self.options):
                raise _invalid("single_group_start must leave both groups non-empty")
        elif self.single_group_start is not None:
            raise _invalid(f"single_group_start not allowed for {self.qtype}")

    def to_payload(self) -> dict:
        payload = {
            "question_id": self.question_id,
            "prompt": self.prompt,
            "qtype": self.qtype,
            "options": list(self.options),
            "likert_points": self.likert_points,
            "active": self.active,
        }
        if self.single_group_start is not None:
            payload["single_group_start"] = self.single_group_start
        return payload

    @classmethod
    def from_payload(cls, payload: dict) -> "Question":
        return cls(
            question_id=payload["question_id"],
            prompt=payload["prompt"],
            qtype=payload["qtype"],
            options=tuple(payload.get("options") or ()),
            likert_points=payload.get("likert_points", 5),
            single_group_start=payload.get("single_group_start"),
            active=payload.get("active", True),
        )


def question_from_spec(spec: dict, question_id: str) -> Question:
    """Build and validate a Question from an authoring-file record."""
    if not isinstance(spec, dict):
        raise _invalid("question spec must be an object")
    unknown = set(spec) - {
        "question_id",
        "prompt",
        "qtype",
        "options",
        "likert_points",
        "single_group_start",
        "active",
    }
    if unknown:
        raise _invalid(f"unknown spec fields: {', '.join(sorted(unknown))}")
    if not isinstance(spec.get("prompt"), str) or not isinstance(spec.get("qtype"), str):
        raise _invalid("spec requires string 'prompt' and 'qtype'")
    options = spec.get("options", [])
    if not isinstance(options, list) or any(not isinstance(o, str) for o in options):
        raise _invalid("'options' must be a list of strings")
    likert_points = spec.get("likert_points", 5)
    if not isinstance(likert_points, int) or isinstance(likert_points, bool):
        raise _invalid("'likert_points' must be an integer")
    split = spec.get("single_group_start")
    if split is not None and (not isinstance(split, int) or isinstance(split, bool)):
        raise _invalid("'single_group_start' must be an integer")
    question = Question(
        question_id=question_id,
        prompt=spec["prompt"],
        qtype=spec["qtype"],
        options=tuple(options),
        likert_points=likert_points,
        single_group_start=split,
        active=bool(spec.get("active", True)),
    )
    question.validate_spec()
    return question


def validate_answer_body(
    question: Question,
    selections=None,
    likert_value: int | None = None,
    free_text: str | None = None,
) -> tuple[tuple[int, ...], int | None, str | None]:
    """Check an answer against its question's shape; returns normalized parts.

    Raises shape-mismatch with a reason naming the violated rule.
    """
    qtype = question.qtype

    if selections is None:
        selections = ()
    if isinstance(selections, (list, tuple, set, frozenset)):
        picks = list(selections)
    else:
        raise _mismatch("selections must be a list of option indices")
    for index in picks:
        if not isinstance(index, int) or isinstance(index, bool):
            raise _mismatch("selections must be integers")
        if not 0 <= index < len(question.options):
            raise _mismatch(f"option index {index} out of range")
    if len(set(picks)) != len(picks):
        raise _mismatch("duplicate option selected")
    picks = tuple(sorted(picks))

    if free_text is not None:
        if not isinstance(free_text, str):
            raise _mismatch("free_text must be a string")
        if qtype not in TEXT_ALLOWED_QTYPES:
            raise _mismatch(f"{qtype} does not accept free text")
        if not free_text.strip():
            free_text = None

    if likert_value is not None:
        if qtype != "likert":
            raise _mismatch(f"{qtype} does not take a likert value")
        if not isinstance(likert_value, int) or isinstance(likert_value, bool):
            raise _mismatch("likert value must be an integer")
        if not 0 <= likert_value < question.likert_points:
            raise _mismatch(
                f"likert value {likert_value} outside 0..{question.likert_points - 1}"
            )

    if qtype in ("choice-single", "choice-single-text"):
        if len(picks) != 1:
            raise _mismatch("exactly one option required")
    elif qtype in ("choice-multiple", "choice-multiple-text"):
        if len(picks) < 1:
            raise _mismatch("at least one option required")
    elif qtype in GROUPED_QTYPES:
        split = question.single_group_start or 0
        multi = [i for i in picks if i < split]
        single = [i for i in picks if i >= split]
        if len(single) != 1:
            raise _mismatch("exactly one option required from the single-select group")
        if len(multi) < 1:
            raise _mismatch("at least one option required from the multi-select group")
    elif qtype == "likert":
        if picks:
            raise _mismatch("likert takes no option selections")
        if likert_value is None:
            raise _mismatch("likert value required")
    elif qtype == "text-input":
        if picks:
            raise _mismatch("text-input takes no option selections")
        if not free_text:
            raise _mismatch("non-empty text required")

    return picks, likert_value, free_text


def validate_contextualization(ctype: str, rating: int | None, text: str | None) -> None:
    """Importance/Satisfaction carry a 0..4 rating; Comment carries text."""
    if ctype not in CTYPES:
        raise DomainError("invalid-value", f"unknown contextualization type {ctype!r}")
    if ctype == CTYPE_COMMENT:
        if rating is not None:
            raise DomainError("invalid-value", "comment contextualization takes no rating")
        if not isinstance(text, str) or not text.strip():
            raise DomainError("invalid-value", "comment contextualization requires text")
    else:
        if text is not None:
            raise DomainError("invalid-value", f"{ctype} contextualization takes no text")
        if not isinstance(rating, int) or isinstance(rating, bool):
            raise DomainError("invalid-value", "rating must be an integer")
        if not RATING_MIN <= rating <= RATING_MAX:
            raise DomainError(
                "invalid-value", f"rating {rating} outside {RATING_MIN}..{RATING_MAX}"
            )
