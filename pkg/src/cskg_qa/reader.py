"""Extractive readers: a deterministic lexical baseline and the external-process protocol.

The baseline ranks context sentences by content-word Jaccard overlap with the
question and proposes, within each sentence, maximal token runs that are
neither stopwords nor question content words.  It is intentionally simple and
fully tie-broken so downstream behavior is reproducible.

External readers are child processes speaking newline-delimited JSON over
stdin/stdout.  Request keys: ``id``, ``question``, ``context``, ``top_k``.
Response keys: ``id``, ``answers`` with ``text``, ``char_start``,
``char_end``, ``score``.  The child must answer the health-check line
``{"id":"__ping__"}`` with ``{"id":"__ping__","answers":[]}``.
"""

from __future__ import annotations

import json
import math
import os
import select
import shlex
import subprocess
import time
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyInput, ProtocolError, ReaderCrashed, ReaderTimeout
from .text import StopwordList, Token, content_words, jaccard, split_sentences, tokenize

RUN_LENGTH_BONUS = 0.001
DEFAULT_TOP_K = 20
DEFAULT_TIMEOUT = 30.0


@dataclass(frozen=True)
class AnswerCandidate:
    """One extractive answer: a context slice with a score."""

    text: str
    char_start: int
    char_end: int
    score: float

    def to_record(self) -> dict:
        return {
            "text": self.text,
            "char_start": self.char_start,
            "char_end": self.char_end,
            "score": self.score,
        }


def _candidate_runs(tokens: list[Token], excluded: set[str], sw: StopwordList) -> list[list[Token]]:
    runs: list[list[Token]] = []
    current: list[Token] = []
    for tok in tokens:
        if tok.surface in sw or tok.surface in excluded:
            if current:
                runs.append(current)
                current = []
        else:
            current.append(tok)
    if current:
        runs.append(current)
    return runs


def lexical_read(
    context: str,
    question: str,
    top_k: int = DEFAULT_TOP_K,
    stopwords: StopwordList | None = None,
) -> list[AnswerCandidate]:
    """Rank candidate spans by sentence overlap plus a small run-length bonus.

    Score ties break toward the later char_start: answers to copular
    "what ... have/is" questions skew sentence-final.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    if not context.strip():
        raise EmptyInput("context is empty")
    if not question.strip():
        raise EmptyInput("question is empty")
    sw = stopwords if stopwords is not None else StopwordList.default()
    question_words = {t.surface for t in content_words(question, sw)}

    candidates: list[AnswerCandidate] = []

    def emit(sentence_offset: int, sentence_score: float, runs: list[list[Token]]) -> None:
        for run in runs:
            start = sentence_offset + run[0].char_start
            end = sentence_offset + run[-1].char_end
            candidates.append(
                AnswerCandidate(
                    text=context[start:end],
                    char_start=start,
                    char_end=end,
                    score=sentence_score + RUN_LENGTH_BONUS * len(run),
                )
            )

    sentences = split_sentences(context)
    scored: list[tuple[int, float, list[Token]]] = []
    for sentence, (s_start, _) in sentences:
        tokens = tokenize(sentence)
        sentence_words = {t.surface for t in tokens if t.surface not in sw}
        score = jaccard(question_words, sentence_words)
        scored.append((s_start, score, tokens))
        emit(s_start, score, _candidate_runs(tokens, question_words, sw))

    if not candidates:
        # Every non-stop token collided with a question word; lift the
        # question-word exclusion so the reader stays total.
        for s_start, score, tokens in scored:
            emit(s_start, score, _candidate_runs(tokens, set(), sw))

    candidates.sort(key=lambda c: (-c.score, -c.char_start))
    return candidates[:top_k]


class LexicalReader:
    """Callable-object form of the baseline, matching the reader interface."""

    def __init__(self, stopwords: StopwordList | None = None):
        self.stopwords = stopwords

    def read(self, context: str, question: str, top_k: int = DEFAULT_TOP_K) -> list[AnswerCandidate]:
        return lexical_read(context, question, top_k, self.stopwords)

    def close(self) -> None:
        pass


def _parse_answers(obj: object) -> list[AnswerCandidate]:
    if not isinstance(obj, list):
        raise ProtocolError("'answers' must be an array")
    answers = []
    for entry in obj:
        if not isinstance(entry, dict):
            raise ProtocolError("each answer must be an object")
        try:
            text = entry["text"]
            start = entry["char_start"]
            end = entry["char_end"]
            score = entry["score"]
        except KeyError as exc:
            raise ProtocolError(f"answer missing key {exc.args[0]!r}") from exc
        if (
            not isinstance(text, str)
            or not isinstance(start, int)
            or not isinstance(end, int)
            or not isinstance(score, (int, float))
            or isinstance(score, bool)
            or not math.isfinite(score)
        ):
            raise ProtocolError("answer fields have wrong types")
        answers.append(AnswerCandidate(text, start, end, float(score)))
    return answers


class ExternalReader:
    """Handle to one child reader process; one request in flight at a time.

    Callers needing parallelism run a pool of processes.  Offsets in responses
    are re-verified against the context: a text/offset mismatch is repaired to
    the first occurrence of the text, and answers whose text does not occur in
    the context at all are dropped.
    """

    def __init__(self, command: str | Sequence[str], timeout: float = DEFAULT_TIMEOUT):
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self.timeout = timeout
        self._counter = 0
        self._buffer = b""
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=None,
            )
        except OSError as exc:
            raise ReaderCrashed(f"cannot start reader {self.command!r}: {exc}") from exc

    def __enter__(self) -> "ExternalReader":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _send_line(self, line: str) -> None:
        if self._proc.poll() is not None:
            raise ReaderCrashed(f"reader exited with code {self._proc.returncode}")
        try:
            self._proc.stdin.write(line.encode("utf-8") + b"\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ReaderCrashed(f"reader closed its input: {exc}") from exc

    def _read_line(self) -> str:
        fd = self._proc.stdout.fileno()
        deadline = time.monotonic() + self.timeout
        while b"\n" not in self._buffer:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise ReaderTimeout(f"no response within {self.timeout} s")
            ready, _, _ = select.select([fd], [], [], remaining)
            if not ready:
                raise ReaderTimeout(f"no response within {self.timeout} s")
            chunk = os.read(fd, 65536)
            if not chunk:
                code = self._proc.poll()
                raise ReaderCrashed(f"reader closed its output (exit code {code})")
            self._buffer += chunk
        line, self._buffer = self._buffer.split(b"\n", 1)
        return line.decode("utf-8")

    def _roundtrip(self, request: dict) -> dict:
        self._send_line(json.dumps(request, ensure_ascii=False))
        line = self._read_line()
        try:
            response = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"malformed response line: {exc.msg}") from exc
        if not isinstance(response, dict):
            raise ProtocolError("response must be a JSON object")
        if response.get("id") != request["id"]:
            raise ProtocolError(
                f"response id {response.get('id')!r} does not echo request id {request['id']!r}"
            )
        if "error" in response:
            raise ProtocolError(f"reader error: {response['error']}")
        if "answers" not in response:
            raise ProtocolError("response missing 'answers'")
        return response

    def ping(self) -> None:
        response = self._roundtrip({"id": "__ping__"})
        if response["answers"] != []:
            raise ProtocolError("ping response must carry an empty answers array")

    def read(self, context: str, question: str, top_k: int = DEFAULT_TOP_K) -> list[AnswerCandidate]:
        if top_k < 1:
            raise ValueError("top_k must be >= 1")
        if not context.strip():
            raise EmptyInput("context is empty")
        if not question.strip():
            raise EmptyInput("question is empty")
        self._counter += 1
        request = {
            "id": f"r{self._counter}",
            "question": question,
            "context": context,
            "top_k": top_k,
        }
        response = self._roundtrip(request)
        answers = _parse_answers(response["answers"])
        if len(answers) > top_k:
            raise ProtocolError(f"got {len(answers)} answers for top_k={top_k}")
        scores = [a.score for a in answers]
        if any(s_prev < s_next for s_prev, s_next in zip(scores, scores[1:])):
            raise ProtocolError("answers are not ordered by descending score")
        verified: list[AnswerCandidate] = []
        for answer in answers:
            if context[answer.char_start : answer.char_end] == answer.text and answer.text:
                verified.append(answer)
                continue
            found = context.find(answer.text) if answer.text else -1
            if found < 0:
                continue
            verified.append(
                AnswerCandidate(answer.text, found, found + len(answer.text), answer.score)
            )
        return verified

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()
        elif self._proc.stdin and not self._proc.stdin.closed:
            self._proc.stdin.close()
