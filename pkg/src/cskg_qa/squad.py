"""SQuAD v1.1 format loading, validation, and saving.

Schema: ``{"version", "data": [{"title", "paragraphs": [{"context",
"qas": [{"id", "question", "answers": [{"text", "answer_start"}]}]}]}]}``.

Gold answers with ``answer_start >= 0`` must equal the context substring at
their offset (case-sensitive).  Generated knowledge-required items carry
``answer_start = -1``: the gold is free text that does not occur in the
passage, optionally flagged with ``knowledge_required: true``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .errors import IoError, ParseError


@dataclass
class Answer:
    text: str
    answer_start: int


@dataclass
class QaItem:
    """One question over one passage, with its gold answer spans."""

    id: str
    context: str
    question: str
    answers: list[Answer]
    knowledge_required: bool = False


@dataclass
class Paragraph:
    context: str
    qas: list[QaItem] = field(default_factory=list)


@dataclass
class Article:
    title: str
    paragraphs: list[Paragraph] = field(default_factory=list)


@dataclass
class SquadDataset:
    articles: list[Article] = field(default_factory=list)
    version: str = "1.1"

    def items(self) -> Iterator[QaItem]:
        for article in self.articles:
            for paragraph in article.paragraphs:
                yield from paragraph.qas

    def __len__(self) -> int:
        return sum(1 for _ in self.items())


def _require(cond: bool, reason: str, path: str | None) -> None:
    if not cond:
        raise ParseError(reason, path)


def parse_squad(obj: object, path: str | None = None) -> SquadDataset:
    """Validate a decoded SQuAD JSON object and build the dataset."""
    _require(isinstance(obj, dict), "top level must be a JSON object", path)
    _require("data" in obj, "missing 'data' array", path)
    data = obj["data"]
    _require(isinstance(data, list), "'data' must be an array", path)
    version = obj.get("version", "1.1")
    _require(isinstance(version, str), "'version' must be a string", path)

    dataset = SquadDataset(version=version)
    seen_ids: set[str] = set()
    for ai, article_obj in enumerate(data):
        loc = f"data[{ai}]"
        _require(isinstance(article_obj, dict), f"{loc} must be an object", path)
        title = article_obj.get("title", "")
        _require(isinstance(title, str), f"{loc}.title must be a string", path)
        paragraphs_obj = article_obj.get("paragraphs")
        _require(isinstance(paragraphs_obj, list), f"{loc}.paragraphs must be an array", path)
        article = Article(title=title)
        for pi, para_obj in enumerate(paragraphs_obj):
            ploc = f"{loc}.paragraphs[{pi}]"
            _require(isinstance(para_obj, dict), f"{ploc} must be an object", path)
            context = para_obj.get("context")
            _require(isinstance(context, str), f"{ploc}.context must be a string", path)
            qas_obj = para_obj.get("qas")
            _require(isinstance(qas_obj, list), f"{ploc}.qas must be an array", path)
            paragraph = Paragraph(context=context)
            for qi, qa_obj in enumerate(qas_obj):
                qloc = f"{ploc}.qas[{qi}]"
                _require(isinstance(qa_obj, dict), f"{qloc} must be an object", path)
                qid = qa_obj.get("id")
                _require(isinstance(qid, str) and qid != "", f"{qloc}.id must be a non-empty string", path)
                _require(qid not in seen_ids, f"duplicate question id {qid!r}", path)
                seen_ids.add(qid)
                question = qa_obj.get("question")
                _require(isinstance(question, str), f"{qloc}.question must be a string", path)
                answers_obj = qa_obj.get("answers")
                _require(
                    isinstance(answers_obj, list) and len(answers_obj) > 0,
                    f"{qloc}.answers must be a non-empty array",
                    path,
                )
                answers = []
                for xi, ans_obj in enumerate(answers_obj):
                    aloc = f"{qloc}.answers[{xi}]"
                    _require(isinstance(ans_obj, dict), f"{aloc} must be an object", path)
                    text = ans_obj.get("text")
                    start = ans_obj.get("answer_start")
                    _require(isinstance(text, str) and text != "", f"{aloc}.text must be a non-empty string", path)
                    _require(
                        isinstance(start, int) and not isinstance(start, bool),
                        f"{aloc}.answer_start must be an integer",
                        path,
                    )
                    if start >= 0:
                        _require(
                            context[start : start + len(text)] == text,
                            f"{aloc}: answer text does not match context at offset {start}",
                            path,
                        )
                    else:
                        _require(start == -1, f"{aloc}.answer_start must be >= 0 or -1", path)
                    answers.append(Answer(text=text, answer_start=start))
                knowledge_required = bool(qa_obj.get("knowledge_required", False))
                paragraph.qas.append(
                    QaItem(
                        id=qid,
                        context=context,
                        question=question,
                        answers=answers,
                        knowledge_required=knowledge_required,
                    )
                )
            article.paragraphs.append(paragraph)
        dataset.articles.append(article)
    return dataset


def load_squad(path: str | Path) -> SquadDataset:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read dataset from {path}: {exc}") from exc
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", str(path), exc.lineno) from exc
    return parse_squad(obj, str(path))


def to_squad_json(dataset: SquadDataset) -> dict:
    data = []
    for article in dataset.articles:
        paragraphs = []
        for paragraph in article.paragraphs:
            qas = []
            for qa in paragraph.qas:
                qa_obj: dict = {
                    "id": qa.id,
                    "question": qa.question,
                    "answers": [
                        {"text": a.text, "answer_start": a.answer_start}
                        for a in qa.answers
                    ],
                }
                if qa.knowledge_required:
                    qa_obj["knowledge_required"] = True
                qas.append(qa_obj)
            paragraphs.append({"context": paragraph.context, "qas": qas})
        data.append({"title": article.title, "paragraphs": paragraphs})
    return {"version": dataset.version, "data": data}


def save_squad(dataset: SquadDataset, path: str | Path) -> None:
    payload = json.dumps(to_squad_json(dataset), ensure_ascii=False, indent=2)
    try:
        Path(path).write_text(payload + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write dataset to {path}: {exc}") from exc
