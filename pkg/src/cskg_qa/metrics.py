"""Answer-span scoring with SQuAD semantics: normalization, EM, token F1.

F1 is the harmonic mean of token-level precision and recall, computed as
2*TP / (2*TP + FN + FP) over the multiset overlap of normalized tokens, with
the per-item score maximized over gold answers.  Normalization lowercases,
strips punctuation and the articles a/an/the, and collapses whitespace.
"""

from __future__ import annotations

import json
import string
import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .errors import EmptyGolds
from .squad import SquadDataset, load_squad

_ARTICLES = frozenset({"a", "an", "the"})
_ASCII_PUNCT = frozenset(string.punctuation)


def _is_punct(ch: str) -> bool:
    return ch in _ASCII_PUNCT or unicodedata.category(ch).startswith("P")


def normalize_answer(text: str) -> str:
    """Lowercase, drop punctuation, drop standalone articles, collapse spaces."""
    lowered = text.lower()
    no_punct = "".join(ch for ch in lowered if not _is_punct(ch))
    tokens = [t for t in no_punct.split() if t not in _ARTICLES]
    return " ".join(tokens)


def exact_match(pred: str, golds: Sequence[str]) -> int:
    """1 iff the normalized prediction equals any normalized gold."""
    if not golds:
        raise EmptyGolds("exact_match requires at least one gold answer")
    norm_pred = normalize_answer(pred)
    return int(any(norm_pred == normalize_answer(g) for g in golds))


@dataclass(frozen=True)
class TokenOverlapCounts:
    """Multiset token overlap between a prediction and one gold answer."""

    tp: int
    fp: int
    fn: int

    @property
    def f1(self) -> float:
        denom = 2 * self.tp + self.fn + self.fp
        if denom == 0:
            # Both token lists empty after normalization.
            return 1.0
        return 2 * self.tp / denom


def token_overlap(pred_tokens: Sequence[str], gold_tokens: Sequence[str]) -> TokenOverlapCounts:
    common = Counter(pred_tokens) & Counter(gold_tokens)
    tp = sum(common.values())
    return TokenOverlapCounts(tp=tp, fp=len(pred_tokens) - tp, fn=len(gold_tokens) - tp)


def token_f1(pred: str, gold: str) -> float:
    """Token-level F1 between normalized strings.

    1.0 when both normalize to empty, 0.0 when exactly one does.
    """
    pred_tokens = normalize_answer(pred).split()
    gold_tokens = normalize_answer(gold).split()
    if not pred_tokens and not gold_tokens:
        return 1.0
    if not pred_tokens or not gold_tokens:
        return 0.0
    return token_overlap(pred_tokens, gold_tokens).f1


@dataclass
class ItemScore:
    id: str
    em: int
    f1: float
    best_gold: str


@dataclass
class EvalReport:
    """Corpus EM/F1 percentages (3 decimals) plus the per-item breakdown."""

    em_percent: float
    f1_percent: float
    per_item: list[ItemScore]
    missing: list[str]

    def to_json(self) -> dict:
        return {
            "em_percent": self.em_percent,
            "f1_percent": self.f1_percent,
            "total": len(self.per_item),
            "missing_predictions": len(self.missing),
            "per_item": [
                {"id": s.id, "em": s.em, "f1": s.f1, "best_gold": s.best_gold}
                for s in self.per_item
            ],
        }


def evaluate(predictions: Mapping[str, str], dataset: SquadDataset | str | Path) -> EvalReport:
    """Score a prediction map against a dataset.

    Items with no prediction score 0 and are listed in ``missing``.  Per item,
    EM is any-gold and F1 is the max over golds; corpus values are means * 100
    reported to 3 decimals.
    """
    if not isinstance(dataset, SquadDataset):
        dataset = load_squad(dataset)
    per_item: list[ItemScore] = []
    missing: list[str] = []
    for qa in dataset.items():
        golds = [a.text for a in qa.answers]
        if not golds:
            raise EmptyGolds(f"item {qa.id} has no gold answers")
        if qa.id not in predictions:
            missing.append(qa.id)
            per_item.append(ItemScore(id=qa.id, em=0, f1=0.0, best_gold=golds[0]))
            continue
        pred = predictions[qa.id]
        em = exact_match(pred, golds)
        best_f1, best_gold = -1.0, golds[0]
        for gold in golds:
            f1 = token_f1(pred, gold)
            if f1 > best_f1:
                best_f1, best_gold = f1, gold
        per_item.append(ItemScore(id=qa.id, em=em, f1=best_f1, best_gold=best_gold))

    n = len(per_item)
    em_pct = round(100.0 * sum(s.em for s in per_item) / n, 3) if n else 0.0
    f1_pct = round(100.0 * sum(s.f1 for s in per_item) / n, 3) if n else 0.0
    return EvalReport(em_percent=em_pct, f1_percent=f1_pct, per_item=per_item, missing=missing)


def load_predictions(path: str | Path) -> dict[str, str]:
    """Read a predictions file: a JSON object mapping id -> answer string."""
    from .errors import IoError, ParseError

    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read predictions from {path}: {exc}") from exc
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", str(path), exc.lineno) from exc
    if not isinstance(obj, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in obj.items()
    ):
        raise ParseError("predictions must be a JSON object mapping id to string", str(path))
    return obj
