"""Deterministic text primitives: tokenization, stopwords, sentence splitting, similarity.

Everything here is a pure function over immutable inputs.  Tokens are maximal
runs of Unicode letters/digits, lowercased, with character offsets into the
source string (Unicode scalar values, not bytes).  No stemming, no POS
tagging, no subword vocabularies.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import IoError

# \w minus underscore: maximal runs of Unicode letters and digits.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Terminal punctuation followed by whitespace or end of text.
_SENTENCE_END_RE = re.compile(r"[.?!]+(?=\s|\Z)")

_DEFAULT_STOPWORDS = frozenset("""
a about above after again against all am an and any are as at be because been
before being below between both but by can could did do does doing down during
each few for from further had has have having he her here hers herself him
himself his how i if in into is it its itself just me might more most must my
myself no nor not now o of off on once only or other our ours ourselves out
over own same shall she should so some such than that the their theirs them
themselves then there these they this those through to too under until up upon
very was we were what when where whether which while who whom whose why will
with would yet you your yours yourself yourselves
ain aren couldn didn doesn hadn hasn haven isn mightn mustn needn shan
shouldn wasn weren won wouldn d ll m re s t ve
""".split())


@dataclass(frozen=True)
class Token:
    """One lowercase token with its character span in the source string."""

    surface: str
    char_start: int
    char_end: int


class StopwordList:
    """A set of lowercase function words.

    The bundled default holds ~150 English function words.  An override file
    is UTF-8, one word per line; ``#`` starts a comment.
    """

    def __init__(self, words: Iterable[str]):
        self.words = frozenset(w.lower().strip() for w in words if w.strip())

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def default(cls) -> "StopwordList":
        return _DEFAULT

    @classmethod
    def from_file(cls, path: str | Path) -> "StopwordList":
        try:
            raw = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot read stopword file {path}: {exc}") from exc
        words = []
        for line in raw.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                words.append(line)
        return cls(words)


_DEFAULT = StopwordList(_DEFAULT_STOPWORDS)


def tokenize(text: str) -> list[Token]:
    """Split text into lowercase letter/digit-run tokens with offsets.

    The source slice at each token's offsets reproduces its surface up to case.
    """
    return [
        Token(m.group().lower(), m.start(), m.end())
        for m in _TOKEN_RE.finditer(text)
    ]


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """Set Jaccard similarity; 0.0 when both sides are empty."""
    sa, sb = set(a), set(b)
    if not sa and not sb:
        return 0.0
    return len(sa & sb) / len(sa | sb)


def tf_cosine(a: Iterable[str], b: Iterable[str]) -> float:
    """Term-frequency cosine similarity; 0.0 when either side is empty."""
    ca, cb = Counter(a), Counter(b)
    if not ca or not cb:
        return 0.0
    dot = sum(ca[w] * cb[w] for w in ca.keys() & cb.keys())
    norm = math.sqrt(sum(v * v for v in ca.values())) * math.sqrt(
        sum(v * v for v in cb.values())
    )
    return dot / norm


def similarity(a: Iterable[str], b: Iterable[str], method: str = "jaccard") -> float:
    """Token-set similarity behind a config switch: "jaccard" (default) or "cosine"."""
    if method == "jaccard":
        return jaccard(a, b)
    if method == "cosine":
        return tf_cosine(a, b)
    raise ValueError(f"unknown similarity method: {method!r}")


def split_sentences(text: str) -> list[tuple[str, tuple[int, int]]]:
    """Split on '.', '?' or '!' followed by whitespace or end of text.

    Returns (sentence, (start, end)) pairs.  Raw segments tile the input;
    reported ranges are trimmed of surrounding whitespace, so their union
    covers every non-whitespace character.  Whitespace-only segments are
    dropped.
    """
    raw_spans: list[tuple[int, int]] = []
    start = 0
    for m in _SENTENCE_END_RE.finditer(text):
        raw_spans.append((start, m.end()))
        start = m.end()
    if start < len(text):
        raw_spans.append((start, len(text)))

    out: list[tuple[str, tuple[int, int]]] = []
    for s, e in raw_spans:
        segment = text[s:e]
        stripped = segment.strip()
        if not stripped:
            continue
        lead = len(segment) - len(segment.lstrip())
        ns, ne = s + lead, s + lead + len(stripped)
        out.append((text[ns:ne], (ns, ne)))
    return out


def content_words(text: str, stopwords: StopwordList | None = None) -> list[Token]:
    """Tokens of ``text`` with stopwords removed, order preserved."""
    sw = stopwords if stopwords is not None else _DEFAULT
    return [t for t in tokenize(text) if t.surface not in sw]
