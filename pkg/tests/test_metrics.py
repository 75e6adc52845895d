from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cskg_qa.errors import EmptyGolds
from cskg_qa.metrics import (
    evaluate,
    exact_match,
    normalize_answer,
    token_f1,
    token_overlap,
)
from cskg_qa.squad import parse_squad

# ---------------------------------------------------------------------------
# Independent oracle: explicit list-removal overlap enumeration plus the
# precision/recall harmonic mean, sharing no code with the implementation.
# ---------------------------------------------------------------------------


def oracle_f1(pred: str, gold: str) -> float:
    pred_tokens = normalize_answer(pred).split()
    gold_tokens = normalize_answer(gold).split()
    if not pred_tokens and not gold_tokens:
        return 1.0
    if not pred_tokens or not gold_tokens:
        return 0.0
    remaining = list(gold_tokens)
    matched = 0
    for token in pred_tokens:
        if token in remaining:
            remaining.remove(token)
            matched += 1
    if matched == 0:
        return 0.0
    precision = matched / len(pred_tokens)
    recall = matched / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


WORDS = ["snow", "white", "cold", "the", "a", "fuji", "mount", "top", "of", "color", "x1", "y2"]


def random_phrase(rng: random.Random) -> str:
    n = rng.randint(0, 6)
    return " ".join(rng.choice(WORDS) for _ in range(n))


class TestNormalize:
    def test_articles_and_punctuation(self):
        assert normalize_answer("The White House.") == "white house"

    def test_fixed_point(self):
        assert normalize_answer("snow") == "snow"

    def test_definition_string(self):
        assert normalize_answer("A period of ten years") == "period of ten years"

    def test_unicode_punctuation(self):
        assert normalize_answer("snow—white’s") == "snowwhites"

    def test_idempotent(self):
        for text in ("The White House.", "a-b c!", "", "  a  the  an "):
            once = normalize_answer(text)
            assert normalize_answer(once) == once


class TestExactMatch:
    def test_normalization_identity(self):
        assert exact_match("Snow.", ["snow"]) == 1

    def test_superstring_is_not_exact(self):
        assert exact_match("white snow", ["snow"]) == 0

    def test_any_gold(self):
        assert exact_match("white", ["snow", "white"]) == 1

    def test_empty_golds(self):
        with pytest.raises(EmptyGolds):
            exact_match("snow", [])


class TestTokenF1:
    def test_partial_overlap(self):
        # pred "white snow" vs gold "snow": tp=1, fp=1, fn=0
        counts = token_overlap(["white", "snow"], ["snow"])
        assert (counts.tp, counts.fp, counts.fn) == (1, 1, 0)
        assert token_f1("white snow", "snow") == pytest.approx(2 / 3)

    def test_identical(self):
        assert token_f1("fresh snow", "fresh snow") == 1.0

    def test_disjoint(self):
        assert token_f1("white", "cold") == 0.0

    def test_one_empty(self):
        assert token_f1("", "snow") == 0.0
        assert token_f1("snow", "") == 0.0

    def test_both_empty_after_normalization(self):
        assert token_f1("the", "a.") == 1.0

    def test_multiset_not_set(self):
        # Repeated prediction tokens are counted against fp.
        assert token_f1("snow snow", "snow") == pytest.approx(2 / 3)

    def test_symmetry(self):
        assert token_f1("white snow", "snow") == token_f1("snow", "white snow")

    def test_oracle_equivalence_seeded(self):
        rng = random.Random(20250808)
        for _ in range(1000):
            pred, gold = random_phrase(rng), random_phrase(rng)
            assert abs(token_f1(pred, gold) - oracle_f1(pred, gold)) < 1e-12

    @given(
        st.lists(st.sampled_from(WORDS), max_size=6),
        st.lists(st.sampled_from(WORDS), max_size=6),
    )
    def test_oracle_equivalence_property(self, pred_words, gold_words):
        pred, gold = " ".join(pred_words), " ".join(gold_words)
        assert abs(token_f1(pred, gold) - oracle_f1(pred, gold)) < 1e-12
        assert 0.0 <= token_f1(pred, gold) <= 1.0


def two_item_dataset():
    return parse_squad(
        {
            "version": "1.1",
            "data": [
                {
                    "title": "t",
                    "paragraphs": [
                        {
                            "context": "The snow is white.",
                            "qas": [
                                {
                                    "id": "q1",
                                    "question": "What is white?",
                                    "answers": [{"text": "snow", "answer_start": 4}],
                                },
                                {
                                    "id": "q2",
                                    "question": "What is the snow?",
                                    "answers": [{"text": "snow", "answer_start": 4}],
                                },
                            ],
                        }
                    ],
                }
            ],
        }
    )


class TestEvaluate:
    def test_hand_fixture_corpus(self):
        report = evaluate({"q1": "snow", "q2": "white snow"}, two_item_dataset())
        assert report.em_percent == 50.0
        assert report.f1_percent == 83.333

    def test_all_exact(self):
        report = evaluate({"q1": "snow", "q2": "Snow."}, two_item_dataset())
        assert report.em_percent == 100.0
        assert report.f1_percent == 100.0

    def test_missing_predictions_score_zero(self):
        report = evaluate({}, two_item_dataset())
        assert report.em_percent == 0.0
        assert report.f1_percent == 0.0
        assert report.missing == ["q1", "q2"]

    def test_em_implies_f1_and_corpus_order(self):
        report = evaluate({"q1": "snow", "q2": "white snow"}, two_item_dataset())
        for item in report.per_item:
            if item.em == 1:
                assert item.f1 == 1.0
        assert report.f1_percent >= report.em_percent

    def test_max_over_golds(self):
        ds = parse_squad(
            {
                "data": [
                    {
                        "title": "t",
                        "paragraphs": [
                            {
                                "context": "Cold white snow fell.",
                                "qas": [
                                    {
                                        "id": "q1",
                                        "question": "?",
                                        "answers": [
                                            {"text": "Cold white snow", "answer_start": 0},
                                            {"text": "snow", "answer_start": 11},
                                        ],
                                    }
                                ],
                            }
                        ],
                    }
                ]
            }
        )
        report = evaluate({"q1": "snow"}, ds)
        assert report.per_item[0].f1 == 1.0
        assert report.per_item[0].best_gold == "snow"
