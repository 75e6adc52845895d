"""Perturbed-question generation from SQuAD-format data plus the knowledge graph.

Three rewrites, one per relation kind:

* synonym — the question mention of a subject is swapped for its synonym.
* definition — the mention is swapped for the (possibly multiword) gloss; an
  immediately preceding standalone article is dropped when the replacement
  itself begins with one ("in the decade" -> "in a period of ten years").
* attribute — wh-insertion on "what "-initial questions: the attribute word
  is inserted after "what" and the gold answer becomes the triple object.
  When the object does not occur in the context the item is flagged
  knowledge-required and carries answer_start = -1: the answer is not
  extractable from the passage by construction.

Contexts are never modified.  Generation is deterministic for a fixed input,
graph, and config.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import IoError, MentionMismatch
from .graph import KnowledgeGraph, RelationKind, Triple, normalize_phrase
from .squad import Answer, Article, Paragraph, QaItem, SquadDataset, load_squad, save_squad
from .text import split_sentences, tokenize

_ARTICLE_BEFORE_RE = re.compile(r"(?:^|(?<=\s))(a|an|the)\s+$", re.IGNORECASE)
_ARTICLES = ("a", "an", "the")


@dataclass(frozen=True)
class Mention:
    """A whole-token occurrence of a graph subject inside a question."""

    subject: str
    char_start: int
    char_end: int


@dataclass
class PerturbationRecord:
    """Provenance sidecar row: which triple rewrote which question span."""

    new_id: str
    source_id: str
    kind: RelationKind
    subject: str
    label: str
    object: str
    replaced_start: int
    replaced_end: int
    replaced_text: str

    def to_json(self) -> dict:
        return {
            "new_id": self.new_id,
            "source_id": self.source_id,
            "kind": self.kind.value,
            "triple": {"subject": self.subject, "label": self.label, "object": self.object},
            "replaced": {
                "start": self.replaced_start,
                "end": self.replaced_end,
                "text": self.replaced_text,
            },
        }


def find_entity_mentions(question: str, kg: KnowledgeGraph) -> list[Mention]:
    """Whole-token, case-insensitive subject matches inside the question.

    Overlaps resolve longest-first then leftmost; the result set is
    non-overlapping, ordered by position.
    """
    tokens = tokenize(question)
    surfaces = [t.surface for t in tokens]
    raw: list[tuple[int, int, str]] = []
    for subject, seq in kg.subject_token_sequences().items():
        n = len(seq)
        if n == 0 or n > len(surfaces):
            continue
        for i in range(len(surfaces) - n + 1):
            if tuple(surfaces[i : i + n]) == seq:
                raw.append((i, i + n, subject))
    raw.sort(key=lambda m: (-(m[1] - m[0]), m[0], m[2]))
    taken: list[tuple[int, int, str]] = []
    for start, end, subject in raw:
        if all(end <= s or start >= e for s, e, _ in taken):
            taken.append((start, end, subject))
    taken.sort(key=lambda m: m[0])
    return [
        Mention(subject, tokens[s].char_start, tokens[e - 1].char_end)
        for s, e, subject in taken
    ]


def _splice_replacement(question: str, start: int, end: int, replacement: str) -> str:
    """Replace question[start:end], normalizing seam spacing to single spaces.

    A standalone article immediately before the span is absorbed when the
    replacement begins with an article.
    """
    prefix, suffix = question[:start], question[end:]
    first = tokenize(replacement)
    if first and first[0].surface in _ARTICLES:
        m = _ARTICLE_BEFORE_RE.search(prefix)
        if m:
            prefix = prefix[: m.start()]
    prefix = re.sub(r"\s+$", " ", prefix)
    suffix = re.sub(r"^\s+", " ", suffix)
    return prefix + replacement + suffix


def _check_mention(question: str, mention: Mention, triple: Triple) -> None:
    span_text = normalize_phrase(question[mention.char_start : mention.char_end])
    if span_text != triple.subject:
        raise MentionMismatch(
            f"span {span_text!r} at {mention.char_start}:{mention.char_end} "
            f"does not match subject {triple.subject!r}"
        )


def _new_id(source_id: str, kind: RelationKind, ordinal: int) -> str:
    return f"{source_id}#{kind.value}{ordinal}"


def perturb_synonym(item: QaItem, mention: Mention, triple: Triple, ordinal: int = 1) -> QaItem:
    """Swap the mention for its synonym; context and answers are untouched."""
    if triple.relation.kind is not RelationKind.SYNONYM:
        raise ValueError("perturb_synonym requires a synonym triple")
    _check_mention(item.question, mention, triple)
    question = _splice_replacement(
        item.question, mention.char_start, mention.char_end, triple.object
    )
    return QaItem(
        id=_new_id(item.id, RelationKind.SYNONYM, ordinal),
        context=item.context,
        question=question,
        answers=list(item.answers),
    )


def perturb_definition(item: QaItem, mention: Mention, triple: Triple, ordinal: int = 1) -> QaItem:
    """Swap the mention for its gloss; surrounding spacing is normalized."""
    if triple.relation.kind is not RelationKind.DEFINITION:
        raise ValueError("perturb_definition requires a definition triple")
    _check_mention(item.question, mention, triple)
    question = _splice_replacement(
        item.question, mention.char_start, mention.char_end, triple.object
    )
    return QaItem(
        id=_new_id(item.id, RelationKind.DEFINITION, ordinal),
        context=item.context,
        question=question,
        answers=list(item.answers),
    )


def _subject_in_answer_scope(item: QaItem, triple: Triple) -> bool:
    """True when the subject occurs in a gold answer or its covering sentence."""
    seq = tuple(t.surface for t in tokenize(triple.subject))

    def contains(text: str) -> bool:
        surfaces = [t.surface for t in tokenize(text)]
        n = len(seq)
        if n == 0 or n > len(surfaces):
            return False
        return any(tuple(surfaces[i : i + n]) == seq for i in range(len(surfaces) - n + 1))

    sentences = split_sentences(item.context)
    for answer in item.answers:
        if contains(answer.text):
            return True
        if answer.answer_start < 0:
            continue
        for sentence, (s_start, s_end) in sentences:
            if s_start <= answer.answer_start < s_end and contains(sentence):
                return True
    return False


def perturb_attribute(item: QaItem, triple: Triple, ordinal: int = 1) -> QaItem | None:
    """Wh-insertion rewrite; returns None when the item does not fit the template."""
    if triple.relation.kind is not RelationKind.ATTRIBUTE:
        raise ValueError("perturb_attribute requires an attribute triple")
    if item.question[:5].lower() != "what ":
        return None
    if not _subject_in_answer_scope(item, triple):
        return None
    question = item.question[:5] + triple.relation.label + " " + item.question[5:]
    lowered = item.context.lower()
    found = lowered.find(triple.object)
    if found >= 0:
        answers = [Answer(text=item.context[found : found + len(triple.object)], answer_start=found)]
        knowledge_required = False
    else:
        answers = [Answer(text=triple.object, answer_start=-1)]
        knowledge_required = True
    return QaItem(
        id=_new_id(item.id, RelationKind.ATTRIBUTE, ordinal),
        context=item.context,
        question=question,
        answers=answers,
        knowledge_required=knowledge_required,
    )


@dataclass
class GenConfig:
    output_path: str
    sidecar_path: str | None = None
    max_per_question: int = 2

    def resolved_sidecar(self) -> str:
        return self.sidecar_path or str(self.output_path) + ".sidecar.jsonl"


@dataclass
class GenSummary:
    synonym: int = 0
    definition: int = 0
    attribute: int = 0
    skipped: int = 0

    def to_json(self) -> dict:
        return {
            "synonym": self.synonym,
            "definition": self.definition,
            "attribute": self.attribute,
            "skipped": self.skipped,
        }


@dataclass
class _Candidate:
    weight: float
    sequence: int
    kind: RelationKind
    triple: Triple
    mention: Mention | None


def _candidates_for_item(
    item: QaItem, kg: KnowledgeGraph, sequence: dict[tuple, int]
) -> list[_Candidate]:
    out: list[_Candidate] = []

    first_mention: dict[str, Mention] = {}
    for mention in find_entity_mentions(item.question, kg):
        first_mention.setdefault(mention.subject, mention)
    for subject, mention in first_mention.items():
        for triple in kg.triples_for_subject(subject):
            if triple.relation.kind in (RelationKind.SYNONYM, RelationKind.DEFINITION):
                out.append(
                    _Candidate(triple.weight, sequence[triple.key()], triple.relation.kind, triple, mention)
                )

    answer_subjects: dict[str, None] = {}
    for answer in item.answers:
        for subject, _ in kg.subjects_in_text(tokenize(answer.text)):
            answer_subjects.setdefault(subject, None)
        if answer.answer_start >= 0:
            for sentence, (s_start, s_end) in split_sentences(item.context):
                if s_start <= answer.answer_start < s_end:
                    for subject, _ in kg.subjects_in_text(tokenize(sentence)):
                        answer_subjects.setdefault(subject, None)
    for subject in answer_subjects:
        for triple in kg.triples_for_subject(subject):
            if triple.relation.kind is RelationKind.ATTRIBUTE:
                out.append(
                    _Candidate(triple.weight, sequence[triple.key()], triple.relation.kind, triple, None)
                )

    out.sort(key=lambda c: (-c.weight, c.sequence))
    return out


def generate_dataset(
    input_path: str | Path, kg: KnowledgeGraph, config: GenConfig
) -> tuple[str, str, GenSummary]:
    """Emit perturbed counterparts for every item with applicable triples.

    Candidates are ranked by triple weight then graph insertion order and
    capped at ``max_per_question`` emitted items per source question.  The
    sidecar holds one provenance record per emitted item, in output order.
    """
    dataset = load_squad(input_path)
    summary = GenSummary()
    records: list[PerturbationRecord] = []
    out_dataset = SquadDataset(version=dataset.version)
    sequence: dict[tuple, int] = {t.key(): i for i, t in enumerate(kg)}

    for article in dataset.articles:
        out_article = Article(title=article.title)
        for paragraph in article.paragraphs:
            out_paragraph = Paragraph(context=paragraph.context)
            for item in paragraph.qas:
                emitted = 0
                ordinals = {kind: 0 for kind in RelationKind}
                for cand in _candidates_for_item(item, kg, sequence):
                    if emitted >= config.max_per_question:
                        summary.skipped += 1
                        continue
                    ordinal = ordinals[cand.kind] + 1
                    if cand.kind is RelationKind.SYNONYM:
                        new_item = perturb_synonym(item, cand.mention, cand.triple, ordinal)
                    elif cand.kind is RelationKind.DEFINITION:
                        new_item = perturb_definition(item, cand.mention, cand.triple, ordinal)
                    else:
                        new_item = perturb_attribute(item, cand.triple, ordinal)
                    if new_item is None:
                        summary.skipped += 1
                        continue
                    ordinals[cand.kind] = ordinal
                    emitted += 1
                    if cand.kind is RelationKind.SYNONYM:
                        summary.synonym += 1
                    elif cand.kind is RelationKind.DEFINITION:
                        summary.definition += 1
                    else:
                        summary.attribute += 1
                    mention = cand.mention
                    records.append(
                        PerturbationRecord(
                            new_id=new_item.id,
                            source_id=item.id,
                            kind=cand.kind,
                            subject=cand.triple.subject,
                            label=cand.triple.relation.label,
                            object=cand.triple.object,
                            replaced_start=mention.char_start if mention else 5,
                            replaced_end=mention.char_end if mention else 5,
                            replaced_text=(
                                item.question[mention.char_start : mention.char_end]
                                if mention
                                else ""
                            ),
                        )
                    )
                    out_paragraph.qas.append(new_item)
            if out_paragraph.qas:
                out_article.paragraphs.append(out_paragraph)
        if out_article.paragraphs:
            out_dataset.articles.append(out_article)

    output_path = str(config.output_path)
    sidecar_path = config.resolved_sidecar()
    save_squad(out_dataset, output_path)
    try:
        Path(sidecar_path).write_text(
            "".join(json.dumps(r.to_json(), ensure_ascii=False) + "\n" for r in records),
            encoding="utf-8",
        )
    except OSError as exc:
        raise IoError(f"cannot write sidecar to {sidecar_path}: {exc}") from exc
    return output_path, sidecar_path, summary
