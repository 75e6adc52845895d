"""Commonsense-knowledge question answering toolkit.

Builds a three-relation commonsense knowledge graph from offline snapshots,
generates perturbed reading-comprehension questions from SQuAD-format data,
answers questions by combining a pluggable extractive reader with direct
knowledge-graph lookup, and scores answers with SQuAD-semantics EM/F1.
"""

from .build import (
    AttributeVocabulary,
    BuildConfig,
    BuildReport,
    RelatedTermEdge,
    build_graph,
    derive_attribute_relation,
    extract_subjects,
    ingest_lexicon,
    ingest_related_terms,
    load_definitions,
)
from .errors import (
    CskgQaError,
    EmptyGolds,
    EmptyInput,
    GraphFrozen,
    InvalidTriple,
    IoError,
    MentionMismatch,
    ParseError,
    ProtocolError,
    ReaderCrashed,
    ReaderTimeout,
)
from .graph import KnowledgeGraph, Relation, RelationKind, Triple, normalize_phrase
from .metrics import (
    EvalReport,
    TokenOverlapCounts,
    evaluate,
    exact_match,
    normalize_answer,
    token_f1,
    token_overlap,
)
from .perturb import (
    GenConfig,
    GenSummary,
    Mention,
    PerturbationRecord,
    find_entity_mentions,
    generate_dataset,
    perturb_attribute,
    perturb_definition,
    perturb_synonym,
)
from .reader import AnswerCandidate, ExternalReader, LexicalReader, lexical_read
from .resolve import (
    ResolvedAnswer,
    question_relation_gate,
    resolve,
    select_subject,
    select_target_sentence,
)
from .squad import Answer, QaItem, SquadDataset, load_squad, parse_squad, save_squad
from .text import (
    StopwordList,
    Token,
    content_words,
    jaccard,
    similarity,
    split_sentences,
    tokenize,
)

__version__ = "0.1.0"
