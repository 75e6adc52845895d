"""The commonsense knowledge graph: typed triples, indexes, JSON Lines persistence.

A triple links a subject to an object through one of three relation kinds:
an attribute word ("color"), a synonym context ("computing devices"), or a
definition context.  Synonyms are interchangeable, so synonym triples are
stored in both directions.  Subjects and objects are stored pre-normalized
(lowercase, single-spaced) and all matching is exact string or token
comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator

from .errors import GraphFrozen, InvalidTriple, IoError, ParseError
from .text import Token, tokenize


class RelationKind(str, Enum):
    ATTRIBUTE = "attribute"
    SYNONYM = "synonym"
    DEFINITION = "definition"


def normalize_phrase(text: str) -> str:
    """Lowercase and collapse internal whitespace to single spaces."""
    return " ".join(text.split()).lower()


@dataclass(frozen=True)
class Relation:
    """Typed link between subject and object.

    For ATTRIBUTE the label is the attribute word (single token, non-empty);
    for SYNONYM/DEFINITION it is the context phrase and may be empty.
    """

    kind: RelationKind
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "label", normalize_phrase(self.label))
        if self.kind is RelationKind.ATTRIBUTE:
            toks = tokenize(self.label)
            if len(toks) != 1 or toks[0].surface != self.label:
                raise InvalidTriple(
                    f"attribute label must be a single token, got {self.label!r}"
                )


@dataclass(frozen=True)
class Triple:
    """One commonsense fact: subject --relation--> object."""

    subject: str
    relation: Relation
    object: str
    provenance: str = ""
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "subject", normalize_phrase(self.subject))
        object.__setattr__(self, "object", normalize_phrase(self.object))
        object.__setattr__(self, "provenance", self.provenance.strip())
        if not self.subject or not self.object:
            raise InvalidTriple("subject and object must be non-empty")
        if self.subject == self.object:
            raise InvalidTriple(f"subject equals object: {self.subject!r}")
        if not (self.weight >= 0.0):
            raise InvalidTriple(f"weight must be >= 0, got {self.weight!r}")

    def key(self) -> tuple[str, str, str, str]:
        """Dedup key: (subject, kind, label, object)."""
        return (self.subject, self.relation.kind.value, self.relation.label, self.object)

    def mirrored(self) -> "Triple":
        return Triple(
            subject=self.object,
            relation=self.relation,
            object=self.subject,
            provenance=self.provenance,
            weight=self.weight,
        )

    def to_record(self) -> dict:
        return {
            "subject": self.subject,
            "kind": self.relation.kind.value,
            "label": self.relation.label,
            "object": self.object,
            "provenance": self.provenance,
            "weight": self.weight,
        }


_RECORD_FIELDS = frozenset({"subject", "kind", "label", "object", "provenance", "weight"})


@dataclass
class _Entry:
    triple: Triple
    subject_tokens: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        self.subject_tokens = tuple(t.surface for t in tokenize(self.triple.subject))


class KnowledgeGraph:
    """Ordered, deduplicated triple collection with subject and label indexes.

    Mutable only while unfrozen and under a single writer; ``freeze()`` makes
    it safe for unrestricted concurrent reads.
    """

    def __init__(self):
        self._entries: list[_Entry] = []
        self._by_subject: dict[str, list[int]] = {}
        self._by_label: dict[str, list[int]] = {}
        self._by_key: dict[tuple[str, str, str, str], int] = {}
        self._frozen = False

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[Triple]:
        return (e.triple for e in self._entries)

    @property
    def triples(self) -> list[Triple]:
        return [e.triple for e in self._entries]

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "KnowledgeGraph":
        self._frozen = True
        return self

    def insert(self, triple: Triple) -> bool:
        """Insert a triple; synonym triples are inserted in both directions.

        Returns True when the given direction was newly inserted.  Duplicate
        (subject, kind, label, object) keys keep the maximum weight.
        """
        if self._frozen:
            raise GraphFrozen("insert after freeze")
        inserted = self._insert_one(triple)
        if triple.relation.kind is RelationKind.SYNONYM:
            self._insert_one(triple.mirrored())
        return inserted

    def _insert_one(self, triple: Triple) -> bool:
        key = triple.key()
        existing = self._by_key.get(key)
        if existing is not None:
            old = self._entries[existing].triple
            if triple.weight > old.weight:
                self._entries[existing] = _Entry(
                    Triple(old.subject, old.relation, old.object, old.provenance, triple.weight)
                )
            return False
        idx = len(self._entries)
        self._entries.append(_Entry(triple))
        self._by_key[key] = idx
        self._by_subject.setdefault(triple.subject, []).append(idx)
        self._by_label.setdefault(triple.relation.label, []).append(idx)
        return True

    def lookup(self, subject: str, relation_label: str) -> list[str]:
        """Objects of all triples matching (subject, label), insertion order."""
        subject = normalize_phrase(subject)
        relation_label = normalize_phrase(relation_label)
        out = []
        for idx in self._by_subject.get(subject, ()):
            t = self._entries[idx].triple
            if t.relation.label == relation_label:
                out.append(t.object)
        return out

    def triples_for_subject(self, subject: str) -> list[Triple]:
        subject = normalize_phrase(subject)
        return [self._entries[i].triple for i in self._by_subject.get(subject, ())]

    def subjects(self) -> list[str]:
        """Distinct subjects in first-insertion order."""
        seen: dict[str, None] = {}
        for e in self._entries:
            seen.setdefault(e.triple.subject, None)
        return list(seen)

    def subject_token_sequences(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, tuple[str, ...]] = {}
        for e in self._entries:
            out.setdefault(e.triple.subject, e.subject_tokens)
        return out

    def subjects_in_text(self, tokens: list[Token]) -> list[tuple[str, int]]:
        """Graph subjects whose full token sequence occurs in ``tokens``.

        Multiword subjects match as contiguous runs.  Returns (subject, first
        match position) ordered by position, then subject length descending.
        """
        surfaces = [t.surface for t in tokens]
        hits: dict[str, int] = {}
        for subject, seq in self.subject_token_sequences().items():
            n = len(seq)
            if n == 0 or n > len(surfaces):
                continue
            for i in range(len(surfaces) - n + 1):
                if tuple(surfaces[i : i + n]) == seq:
                    hits[subject] = i
                    break
        return sorted(hits.items(), key=lambda kv: (kv[1], -len(kv[0]), kv[0]))

    def relation_labels(self) -> set[str]:
        """The distinct label universe over all triples."""
        return {e.triple.relation.label for e in self._entries}

    def save(self, path: str | Path) -> None:
        """Write the graph as JSON Lines, one triple per line, insertion order."""
        lines = [
            json.dumps(e.triple.to_record(), ensure_ascii=False) for e in self._entries
        ]
        try:
            Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot write graph to {path}: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "KnowledgeGraph":
        """Read a JSON Lines graph file; unknown fields are rejected.

        load(save(kg)) is structurally identical to kg, including order.
        Synonym triples missing their mirror are repaired by appending it.
        """
        try:
            raw = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot read graph from {path}: {exc}") from exc
        kg = cls()
        spath = str(path)
        for lineno, line in enumerate(raw.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", spath, lineno) from exc
            if not isinstance(record, dict):
                raise ParseError("triple record must be a JSON object", spath, lineno)
            unknown = set(record) - _RECORD_FIELDS
            if unknown:
                raise ParseError(
                    f"unknown field {sorted(unknown)[0]!r}", spath, lineno
                )
            missing = _RECORD_FIELDS - set(record)
            if missing:
                raise ParseError(
                    f"missing field {sorted(missing)[0]!r}", spath, lineno
                )
            kind_raw = record["kind"]
            try:
                kind = RelationKind(kind_raw)
            except ValueError:
                raise ParseError(f"unknown relation kind {kind_raw!r}", spath, lineno)
            for name in ("subject", "label", "object", "provenance"):
                if not isinstance(record[name], str):
                    raise ParseError(f"field {name!r} must be a string", spath, lineno)
            if not isinstance(record["weight"], (int, float)) or isinstance(
                record["weight"], bool
            ):
                raise ParseError("field 'weight' must be a number", spath, lineno)
            try:
                triple = Triple(
                    subject=record["subject"],
                    relation=Relation(kind, record["label"]),
                    object=record["object"],
                    provenance=record["provenance"],
                    weight=float(record["weight"]),
                )
            except InvalidTriple as exc:
                raise ParseError(str(exc), spath, lineno) from exc
            kg._insert_one(triple)
        # Repair missing synonym mirrors so the symmetry invariant holds for
        # hand-authored files; save() output always already contains both.
        for entry in list(kg._entries):
            t = entry.triple
            if t.relation.kind is RelationKind.SYNONYM:
                kg._insert_one(t.mirrored())
        return kg
