"""Knowledge-gated answering: gate on relation words, look up the triple, else defer.

The flow: (1) the gate scans question tokens and n-grams for graph relation
labels — if none match, the reader's top candidate is returned untouched, so
relation-free questions can never be affected by the graph (the no-harm
property); (2) reader candidates are collected; (3) the commonsense subject is
located by scanning candidates in score order, falling back to the most
question-similar context sentence; (4) the first (question-order label,
insertion-order triple) match returns the triple object with a full trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

from .errors import EmptyInput
from .graph import KnowledgeGraph, RelationKind
from .perturb import find_entity_mentions
from .reader import DEFAULT_TOP_K, AnswerCandidate
from .text import StopwordList, content_words, jaccard, split_sentences, tokenize

_MAX_LABEL_TOKENS = 3


class Reader(Protocol):
    def read(self, context: str, question: str, top_k: int = ...) -> list[AnswerCandidate]: ...


@dataclass
class ResolvedAnswer:
    """Answer text plus where it came from and why."""

    text: str
    origin: str  # "knowledge" | "reader"
    trace: dict

    def to_json(self) -> dict:
        return {"text": self.text, "origin": self.origin, "trace": self.trace}


def question_relation_gate(question: str, kg: KnowledgeGraph) -> list[str]:
    """Relation labels occurring in the question as token n-grams (n <= 3).

    Returns unique labels ordered by first position in the question, longer
    n-grams first on position ties.  An empty list means the gate is closed.
    """
    labels = kg.relation_labels()
    surfaces = [t.surface for t in tokenize(question)]
    found: dict[str, tuple[int, int]] = {}
    for i in range(len(surfaces)):
        for n in range(1, _MAX_LABEL_TOKENS + 1):
            if i + n > len(surfaces):
                break
            gram = " ".join(surfaces[i : i + n])
            if gram in labels and gram not in found:
                found[gram] = (i, -n)
    return [label for label, _ in sorted(found.items(), key=lambda kv: kv[1])]


def select_target_sentence(
    context: str, question: str, stopwords: StopwordList | None = None
) -> tuple[str, float]:
    """The context sentence most similar to the question; earlier wins ties."""
    sentences = split_sentences(context)
    if not sentences:
        raise EmptyInput("context has no sentences")
    question_words = {t.surface for t in content_words(question, stopwords)}
    best: tuple[str, float] | None = None
    for sentence, _ in sentences:
        score = jaccard(question_words, {t.surface for t in content_words(sentence, stopwords)})
        if best is None or score > best[1]:
            best = (sentence, score)
    return best


def _select_subject(
    candidates: list[AnswerCandidate], target_sentence: str, kg: KnowledgeGraph
) -> tuple[str | None, str | None]:
    for candidate in candidates:
        hits = kg.subjects_in_text(tokenize(candidate.text))
        if hits:
            return hits[0][0], "candidates"
    hits = kg.subjects_in_text(tokenize(target_sentence))
    if hits:
        return hits[0][0], "sentence"
    return None, None


def select_subject(
    candidates: list[AnswerCandidate], target_sentence: str, kg: KnowledgeGraph
) -> str | None:
    """First graph subject in the candidates (score order), else in the sentence."""
    return _select_subject(candidates, target_sentence, kg)[0]


def _rewrite_synonym_mentions(question: str, context: str, kg: KnowledgeGraph) -> str:
    """Swap question mentions for synonym counterparts that the context uses."""
    context_surfaces = [t.surface for t in tokenize(context)]

    def occurs(phrase: str) -> bool:
        seq = tuple(t.surface for t in tokenize(phrase))
        n = len(seq)
        if n == 0 or n > len(context_surfaces):
            return False
        return any(
            tuple(context_surfaces[i : i + n]) == seq
            for i in range(len(context_surfaces) - n + 1)
        )

    for mention in reversed(find_entity_mentions(question, kg)):
        if occurs(mention.subject):
            continue
        for triple in kg.triples_for_subject(mention.subject):
            if triple.relation.kind is RelationKind.SYNONYM and occurs(triple.object):
                question = (
                    question[: mention.char_start]
                    + triple.object
                    + question[mention.char_end :]
                )
                break
    return question


def resolve(
    context: str,
    question: str,
    kg: KnowledgeGraph,
    reader: Reader,
    top_k: int = DEFAULT_TOP_K,
    resolve_synonyms: bool = False,
    stopwords: StopwordList | None = None,
) -> ResolvedAnswer:
    """Answer one question, preferring a gated knowledge lookup over the reader."""
    if not context.strip():
        raise EmptyInput("context is empty")
    if not question.strip():
        raise EmptyInput("question is empty")

    gate = question_relation_gate(question, kg)
    trace: dict = {"gate": gate}
    if not gate:
        candidates = reader.read(context, question, top_k)
        trace["candidates_examined"] = len(candidates)
        text = candidates[0].text if candidates else ""
        return ResolvedAnswer(text=text, origin="reader", trace=trace)

    reader_question = question
    if resolve_synonyms:
        reader_question = _rewrite_synonym_mentions(question, context, kg)
        if reader_question != question:
            trace["rewritten_question"] = reader_question

    candidates = reader.read(context, reader_question, top_k)
    trace["candidates_examined"] = len(candidates)
    sentence, sentence_score = select_target_sentence(context, question, stopwords)
    trace["target_sentence"] = sentence
    trace["target_score"] = sentence_score

    subject, source = _select_subject(candidates, sentence, kg)
    trace["subject"] = subject
    trace["subject_source"] = source
    if subject is not None:
        triples = kg.triples_for_subject(subject)
        for label in gate:
            for triple in triples:
                if triple.relation.label == label:
                    trace["matched_label"] = label
                    trace["triple"] = {
                        "subject": triple.subject,
                        "kind": triple.relation.kind.value,
                        "label": triple.relation.label,
                        "object": triple.object,
                    }
                    return ResolvedAnswer(text=triple.object, origin="knowledge", trace=trace)

    text = candidates[0].text if candidates else ""
    return ResolvedAnswer(text=text, origin="reader", trace=trace)
