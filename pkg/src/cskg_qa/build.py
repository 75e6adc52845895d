"""Ingestion pipelines that construct the knowledge graph from offline snapshots.

All external sources are snapshot files, never live services: a SQuAD-format
JSON file supplies the subject set, a CSV edge dump supplies related terms, a
TSV term/definition snapshot stands in for encyclopedia lookups, and a TSV
lexicon supplies synonym/definition rows.  The pipeline is deterministic:
identical inputs yield byte-identical saved graphs.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IoError, ParseError
from .graph import KnowledgeGraph, Relation, RelationKind, Triple, normalize_phrase
from .squad import load_squad
from .text import StopwordList, content_words, split_sentences, tokenize

DEFAULT_ATTRIBUTE_WORDS = (
    "color",
    "temperature",
    "size",
    "shape",
    "taste",
    "material",
    "weight",
    "height",
    "speed",
    "smell",
)


@dataclass(frozen=True)
class AttributeVocabulary:
    """Closed, ordered list of attribute words used to derive edge relations."""

    words: tuple[str, ...] = DEFAULT_ATTRIBUTE_WORDS

    def __post_init__(self):
        if not self.words:
            raise ValueError("attribute vocabulary must be non-empty")
        for w in self.words:
            toks = tokenize(w)
            if len(toks) != 1 or toks[0].surface != w:
                raise ValueError(f"attribute word must be a single lowercase token: {w!r}")

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def order(self, word: str) -> int:
        return self.words.index(word)


@dataclass(frozen=True)
class RelatedTermEdge:
    """One related-term edge from the concept snapshot."""

    term_a: str
    term_b: str
    weight: float


@dataclass
class BuildConfig:
    squad_path: str
    edges_path: str
    lexicon_path: str
    definitions_path: str
    min_df: int = 3
    vocabulary: AttributeVocabulary = field(default_factory=AttributeVocabulary)
    stopwords: StopwordList | None = None


@dataclass
class BuildReport:
    """Counts of triples per relation kind in the final graph, plus drops."""

    attribute: int = 0
    synonym: int = 0
    definition: int = 0
    dropped_edges: int = 0

    def to_json(self) -> dict:
        return {
            "attribute": self.attribute,
            "synonym": self.synonym,
            "definition": self.definition,
            "dropped_edges": self.dropped_edges,
        }


def extract_subjects(squad_path: str | Path, min_df: int = 3) -> list[str]:
    """Candidate subjects: content words of answers and questions by document frequency.

    A word's document frequency is the number of articles whose questions or
    gold answers contain it.  Words with df >= min_df are returned sorted by
    descending frequency, then lexicographically.
    """
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    dataset = load_squad(squad_path)
    df: Counter[str] = Counter()
    for article in dataset.articles:
        words: set[str] = set()
        for paragraph in article.paragraphs:
            for qa in paragraph.qas:
                words.update(t.surface for t in content_words(qa.question))
                for answer in qa.answers:
                    words.update(t.surface for t in content_words(answer.text))
        df.update(words)
    keep = [(count, word) for word, count in df.items() if count >= min_df]
    keep.sort(key=lambda cw: (-cw[0], cw[1]))
    return [word for _, word in keep]


def ingest_related_terms(edges_path: str | Path, subjects: set[str]) -> list[RelatedTermEdge]:
    """Read the related-term CSV snapshot, keeping edges whose term_a is a subject.

    Expected header: ``term_a,term_b,weight``.  Duplicate (term_a, term_b)
    pairs collapse to one edge keeping the maximum weight.
    """
    spath = str(edges_path)
    try:
        raw = Path(edges_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read edge snapshot from {edges_path}: {exc}") from exc
    rows = list(csv.reader(raw.splitlines()))
    if not rows or [c.strip() for c in rows[0]] != ["term_a", "term_b", "weight"]:
        raise ParseError("expected header 'term_a,term_b,weight'", spath, 1)
    edges: dict[tuple[str, str], RelatedTermEdge] = {}
    for rowno, row in enumerate(rows[1:], start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", spath, rowno)
        term_a = normalize_phrase(row[0])
        term_b = normalize_phrase(row[1])
        try:
            weight = float(row[2])
        except ValueError:
            raise ParseError(f"weight is not a number: {row[2]!r}", spath, rowno)
        if weight < 0:
            raise ParseError(f"weight must be >= 0, got {row[2]}", spath, rowno)
        if not term_a or not term_b:
            raise ParseError("term_a and term_b must be non-empty", spath, rowno)
        if term_a == term_b:
            raise ParseError(f"term_a equals term_b: {term_a!r}", spath, rowno)
        if term_a not in subjects:
            continue
        key = (term_a, term_b)
        prior = edges.get(key)
        if prior is None or weight > prior.weight:
            edges[key] = RelatedTermEdge(term_a, term_b, weight)
    return list(edges.values())


def load_definitions(definitions_path: str | Path) -> dict[str, str]:
    """Read the TSV definition snapshot: ``term <TAB> definition text``."""
    spath = str(definitions_path)
    try:
        raw = Path(definitions_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read definitions from {definitions_path}: {exc}") from exc
    defs: dict[str, str] = {}
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t", 1)
        if len(parts) != 2:
            raise ParseError("expected 'term<TAB>definition'", spath, lineno)
        term = normalize_phrase(parts[0])
        definition = parts[1].strip()
        if not term:
            raise ParseError("term must be non-empty", spath, lineno)
        if not definition:
            raise ParseError(f"definition for {term!r} must be non-empty", spath, lineno)
        defs[term] = definition
    return defs


def _contains_run(haystack: list[str], needle: tuple[str, ...]) -> bool:
    n = len(needle)
    if n == 0 or n > len(haystack):
        return False
    return any(tuple(haystack[i : i + n]) == needle for i in range(len(haystack) - n + 1))


def derive_attribute_relation(
    subject: str,
    obj: str,
    definitions: dict[str, str],
    vocabulary: AttributeVocabulary | None = None,
    stopwords: StopwordList | None = None,
) -> str | None:
    """Derive the attribute word linking subject to object from definition text.

    Primary rule: in the first sentence of the object's definition that
    mentions the subject, return the earliest vocabulary word.  Fallback, when
    no sentence mentions the subject: the highest-count vocabulary word shared
    by both definitions, ties broken by vocabulary order.  Returns None when
    neither rule produces a word; absence is a value, not an error.
    """
    vocab = vocabulary or AttributeVocabulary()
    sw = stopwords if stopwords is not None else StopwordList.default()
    subject = normalize_phrase(subject)
    obj = normalize_phrase(obj)
    subject_seq = tuple(t.surface for t in tokenize(subject))

    def acceptable(word: str) -> bool:
        return word in vocab and word not in sw and word != subject and word != obj

    obj_def = definitions.get(obj)
    if obj_def is not None:
        for sentence, _ in split_sentences(obj_def):
            surfaces = [t.surface for t in tokenize(sentence)]
            if _contains_run(surfaces, subject_seq):
                for surface in surfaces:
                    if acceptable(surface):
                        return surface
                return None

    subj_def = definitions.get(subject)
    if obj_def is None or subj_def is None:
        return None
    subj_counts = Counter(t.surface for t in content_words(subj_def, sw))
    obj_counts = Counter(t.surface for t in content_words(obj_def, sw))
    best: tuple[int, int] | None = None
    best_word: str | None = None
    for word in vocab.words:
        if not acceptable(word):
            continue
        if subj_counts[word] == 0 or obj_counts[word] == 0:
            continue
        score = (subj_counts[word] + obj_counts[word], -vocab.order(word))
        if best is None or score > best:
            best, best_word = score, word
    return best_word


def ingest_lexicon(lexicon_path: str | Path) -> list[Triple]:
    """Read the synonym/definition lexicon TSV.

    Row format: ``head <TAB> kind <TAB> tail <TAB> context`` with kind one of
    ``synonym`` or ``definition``; context may be empty and becomes the
    relation label.  One triple per row; symmetric expansion of synonyms
    happens at graph insertion.
    """
    spath = str(lexicon_path)
    try:
        raw = Path(lexicon_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read lexicon from {lexicon_path}: {exc}") from exc
    kinds = {"synonym": RelationKind.SYNONYM, "definition": RelationKind.DEFINITION}
    triples: list[Triple] = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) not in (3, 4):
            raise ParseError(
                f"expected 'head<TAB>kind<TAB>tail<TAB>context', got {len(parts)} fields",
                spath,
                lineno,
            )
        head, kind_raw, tail = parts[0], parts[1].strip().lower(), parts[2]
        context = parts[3] if len(parts) == 4 else ""
        if kind_raw not in kinds:
            raise ParseError(
                f"field 'kind' must be 'synonym' or 'definition', got {kind_raw!r}",
                spath,
                lineno,
            )
        if not head.strip():
            raise ParseError("field 'head' must be non-empty", spath, lineno)
        if not tail.strip():
            raise ParseError("field 'tail' must be non-empty", spath, lineno)
        triples.append(
            Triple(
                subject=head,
                relation=Relation(kinds[kind_raw], context),
                object=tail,
                provenance=spath,
            )
        )
    return triples


def build_graph(config: BuildConfig) -> tuple[KnowledgeGraph, BuildReport]:
    """Run the full snapshot-ingestion pipeline and return a frozen graph.

    Edges whose attribute relation cannot be derived are dropped and counted,
    never guessed.  Fails fast on the first ParseError.
    """
    subjects = extract_subjects(config.squad_path, config.min_df)
    edges = ingest_related_terms(config.edges_path, set(subjects))
    definitions = load_definitions(config.definitions_path)

    kg = KnowledgeGraph()
    report = BuildReport()
    for edge in edges:
        label = derive_attribute_relation(
            edge.term_a, edge.term_b, definitions, config.vocabulary, config.stopwords
        )
        if label is None:
            report.dropped_edges += 1
            continue
        kg.insert(
            Triple(
                subject=edge.term_a,
                relation=Relation(RelationKind.ATTRIBUTE, label),
                object=edge.term_b,
                provenance=str(config.edges_path),
                weight=edge.weight,
            )
        )
    for triple in ingest_lexicon(config.lexicon_path):
        kg.insert(triple)
    kg.freeze()

    for triple in kg:
        if triple.relation.kind is RelationKind.ATTRIBUTE:
            report.attribute += 1
        elif triple.relation.kind is RelationKind.SYNONYM:
            report.synonym += 1
        else:
            report.definition += 1
    return kg, report
