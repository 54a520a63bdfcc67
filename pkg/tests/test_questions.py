from __future__ import annotations

import pytest

from feedledger import DomainError
from feedledger.questions import (
    QTYPES,
    Question,
    question_from_spec,
    validate_answer_body,
    validate_contextualization,
)

from qmatrix import ANSWER_CASES, QUESTION_SPECS


def build_question(qtype: str) -> Question:
    return question_from_spec(QUESTION_SPECS[qtype], question_id=f"q-{qtype}")


def test_matrix_covers_all_types():
    assert set(QUESTION_SPECS) == set(QTYPES)
    assert set(ANSWER_CASES) == set(QTYPES)


@pytest.mark.parametrize("qtype", QTYPES)
def test_accepted_bodies_pass(qtype):
    question = build_question(qtype)
    accepted, _, _ = ANSWER_CASES[qtype]
    validate_answer_body(question, **accepted)


@pytest.mark.parametrize(
    "qtype,case", [(q, i) for q in QTYPES for i in (1, 2)], ids=lambda v: str(v)
)
def test_rejected_bodies_fail(qtype, case):
    question = build_question(qtype)
    body = ANSWER_CASES[qtype][case]
    with pytest.raises(DomainError) as err:
        validate_answer_body(question, **body)
    assert err.value.code == "shape-mismatch"


def test_likert_point_boundaries():
    question = build_question("likert")
    for value in range(5):
        validate_answer_body(question, likert_value=value)
    for value in (-1, 5, 7):
        with pytest.raises(DomainError):
            validate_answer_body(question, likert_value=value)


def test_text_variants_accept_and_normalize_optional_text():
    question = build_question("choice-single-text")
    picks, likert, text = validate_answer_body(question, selections=[1], free_text="  ")
    assert picks == (1,) and text is None  # blank optional text is dropped
    picks, _, text = validate_answer_body(question, selections=[1], free_text="call me back")
    assert text == "call me back"
    plain = build_question("choice-single")
    with pytest.raises(DomainError):
        validate_answer_body(plain, selections=[1], free_text="not allowed here")


def test_grouped_type_needs_both_groups():
    question = build_question("choice-multiple-single")
    picks, _, _ = validate_answer_body(question, selections=[1, 0, 3])
    assert picks == (0, 1, 3)  # normalized to sorted order
    with pytest.raises(DomainError):
        validate_answer_body(question, selections=[3])  # single only


def test_invalid_specs_rejected():
    bad_specs = [
        {"prompt": "x", "qtype": "choice-single", "options": []},
        {"prompt": "x", "qtype": "choice-single", "options": ["only"]},
        {"prompt": "x", "qtype": "nonsense"},
        {"prompt": "", "qtype": "text-input"},
        {"prompt": "x", "qtype": "likert", "likert_points": 1},
        {"prompt": "x", "qtype": "text-input", "options": ["a", "b"]},
        {"prompt": "x", "qtype": "choice-multiple-single", "options": ["a", "b"]},  # no split
        {
            "prompt": "x",
            "qtype": "choice-multiple-single",
            "options": ["a", "b"],
            "single_group_start": 2,  # empty single group
        },
        {"prompt": "x", "qtype": "choice-single", "options": ["a", "a"]},  # duplicate labels
        {"prompt": "x", "qtype": "choice-single", "options": ["a", "b"], "bogus": 1},
    ]
    for spec in bad_specs:
        with pytest.raises(DomainError) as err:
            question_from_spec(spec, "q1")
        assert err.value.code == "invalid-spec", spec


def test_likert_labels_must_match_points():
    spec = {
        "prompt": "x",
        "qtype": "likert",
        "likert_points": 3,
        "options": ["low", "mid", "high"],
    }
    question = question_from_spec(spec, "q1")
    assert question.options == ("low", "mid", "high")
    spec["options"] = ["low", "high"]
    with pytest.raises(DomainError):
        question_from_spec(spec, "q2")


def test_contextualization_values():
    validate_contextualization("importance", 4, None)
    validate_contextualization("satisfaction", 0, None)
    validate_contextualization("comment", None, "options missing X")
    cases = [
        ("importance", None, None),
        ("importance", 5, None),
        ("importance", 2, "no text allowed"),
        ("satisfaction", -1, None),
        ("comment", 3, "text"),
        ("comment", None, "   "),
        ("sideways", 1, None),
    ]
    for ctype, rating, text in cases:
        with pytest.raises(DomainError) as err:
            validate_contextualization(ctype, rating, text)
        assert err.value.code == "invalid-value"
