"""Command-line interface: build-kg, gen-dataset, answer, eval, inspect-kg.

stdout carries only machine-readable JSON; diagnostics go to stderr.  Exit
codes: 0 success, 1 parse error, 2 I/O error, 3 reader crashed or timed out.
Configuration is a single JSON file (``--config`` or $CSKG_CONFIG) plus flag
overrides; flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import queue
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

from .build import AttributeVocabulary, BuildConfig, build_graph
from .errors import (
    CskgQaError,
    EmptyInput,
    IoError,
    ParseError,
    ProtocolError,
    ReaderCrashed,
    ReaderTimeout,
)
from .graph import KnowledgeGraph, normalize_phrase
from .metrics import evaluate, load_predictions
from .perturb import GenConfig, generate_dataset
from .reader import DEFAULT_TIMEOUT, DEFAULT_TOP_K, ExternalReader, LexicalReader
from .resolve import resolve
from .squad import load_squad
from .text import StopwordList

CONFIG_ENV_VAR = "CSKG_CONFIG"

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_IO = 2
EXIT_READER = 3


@dataclass
class Config:
    squad: str | None = None
    edges: str | None = None
    lexicon: str | None = None
    definitions: str | None = None
    graph: str | None = None
    report: str | None = None
    stopwords: str | None = None
    attribute_vocabulary: list[str] | None = None
    min_df: int = 3
    top_k: int = DEFAULT_TOP_K
    max_per_question: int = 2
    reader: str = "lexical"
    timeout: float = DEFAULT_TIMEOUT
    resolve_synonyms: bool = False
    workers: int = 4


def load_config(path: str | None) -> Config:
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if path is None:
        return Config()
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path, exc.lineno) from exc
    if not isinstance(obj, dict):
        raise ParseError("config must be a JSON object", path)
    known = {f.name for f in fields(Config)}
    unknown = set(obj) - known
    if unknown:
        raise ParseError(f"unknown config key {sorted(unknown)[0]!r}", path)
    return Config(**obj)


def _merge(config: Config, args: argparse.Namespace) -> Config:
    for f in fields(Config):
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(config, f.name, value)
    return config


def _require_file(path: str | None, role: str) -> str:
    if path is None:
        raise IoError(f"no {role} path given (flag or config)")
    if not Path(path).is_file():
        raise IoError(f"{role} file does not exist: {path}")
    return path


def _stopwords(config: Config) -> StopwordList | None:
    if config.stopwords is None:
        return None
    _require_file(config.stopwords, "stopwords")
    return StopwordList.from_file(config.stopwords)


def _print_json(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, ensure_ascii=False) + "\n")


def cmd_build_kg(args: argparse.Namespace) -> int:
    config = _merge(load_config(args.config), args)
    build = BuildConfig(
        squad_path=_require_file(config.squad, "squad snapshot"),
        edges_path=_require_file(config.edges, "edge snapshot"),
        lexicon_path=_require_file(config.lexicon, "lexicon"),
        definitions_path=_require_file(config.definitions, "definitions snapshot"),
        min_df=config.min_df,
        vocabulary=(
            AttributeVocabulary(tuple(config.attribute_vocabulary))
            if config.attribute_vocabulary
            else AttributeVocabulary()
        ),
        stopwords=_stopwords(config),
    )
    kg, report = build_graph(build)
    if not args.dry_run:
        if config.graph is None:
            raise IoError("no graph output path given (flag or config)")
        kg.save(config.graph)
        report_path = config.report or str(config.graph) + ".report.json"
        Path(report_path).write_text(
            json.dumps(report.to_json(), ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )
    _print_json(report.to_json())
    return EXIT_OK


def cmd_gen_dataset(args: argparse.Namespace) -> int:
    config = _merge(load_config(args.config), args)
    graph_path = _require_file(config.graph, "graph")
    _require_file(args.input, "input dataset")
    kg = KnowledgeGraph.load(graph_path).freeze()
    gen = GenConfig(
        output_path=args.output,
        sidecar_path=args.sidecar,
        max_per_question=config.max_per_question,
    )
    _, _, summary = generate_dataset(args.input, kg, gen)
    _print_json(summary.to_json())
    return EXIT_OK


def _make_reader(spec: str, timeout: float, stopwords: StopwordList | None):
    if spec == "lexical":
        return LexicalReader(stopwords)
    return ExternalReader(spec, timeout=timeout)


def cmd_answer(args: argparse.Namespace) -> int:
    config = _merge(load_config(args.config), args)
    graph_path = _require_file(config.graph, "graph")
    dataset_path = _require_file(args.dataset, "dataset")
    kg = KnowledgeGraph.load(graph_path).freeze()
    dataset = load_squad(dataset_path)
    stopwords = _stopwords(config)
    items = list(dataset.items())

    out_path = args.out
    manifest_path = str(out_path) + ".manifest.json"
    predictions: dict[str, str] = {}
    completed: set[str] = set()
    if args.resume and Path(manifest_path).is_file():
        manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
        completed = set(manifest.get("completed", []))
        if Path(out_path).is_file():
            predictions.update(load_predictions(out_path))
        completed &= set(predictions)
    pending = [qa for qa in items if qa.id not in completed]

    workers = max(1, config.workers)
    lexical = config.reader == "lexical"
    handles = 1 if lexical else min(workers, max(1, len(pending)))
    readers = []
    results: dict[str, object] = {}
    failure: Exception | None = None
    try:
        try:
            for _ in range(handles):
                readers.append(_make_reader(config.reader, config.timeout, stopwords))
            if not lexical:
                for r in readers:
                    r.ping()
        except (ReaderCrashed, ReaderTimeout, ProtocolError) as exc:
            failure = exc

        if failure is None:
            pool: queue.Queue = queue.Queue()
            for r in readers:
                for _ in range(workers if lexical else 1):
                    pool.put(r)

            def work(qa):
                reader = pool.get()
                try:
                    return resolve(
                        qa.context,
                        qa.question,
                        kg,
                        reader,
                        top_k=config.top_k,
                        resolve_synonyms=config.resolve_synonyms,
                        stopwords=stopwords,
                    )
                finally:
                    pool.put(reader)

            if pending:
                with ThreadPoolExecutor(max_workers=workers) as executor:
                    futures = [(qa, executor.submit(work, qa)) for qa in pending]
                    for qa, future in futures:
                        try:
                            results[qa.id] = future.result()
                        except (ReaderCrashed, ReaderTimeout, ProtocolError, EmptyInput) as exc:
                            if failure is None:
                                failure = exc
    finally:
        for r in readers:
            r.close()

    traces = []
    for qa in items:
        resolved = results.get(qa.id)
        if resolved is not None:
            predictions[qa.id] = resolved.text
            traces.append({"id": qa.id, **resolved.to_json()})

    ordered = {qa.id: predictions[qa.id] for qa in items if qa.id in predictions}
    Path(out_path).write_text(
        json.dumps(ordered, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    if args.explain:
        Path(args.explain).write_text(
            "".join(json.dumps(t, ensure_ascii=False) + "\n" for t in traces),
            encoding="utf-8",
        )

    if failure is not None:
        Path(manifest_path).write_text(
            json.dumps({"completed": list(ordered)}, ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )
        print(f"reader failure: {failure}", file=sys.stderr)
        return EXIT_READER
    if Path(manifest_path).is_file():
        Path(manifest_path).unlink()
    origins = [r.origin for r in results.values()]
    _print_json(
        {
            "total": len(items),
            "answered": len(ordered),
            "knowledge": sum(1 for o in origins if o == "knowledge"),
            "reader": sum(1 for o in origins if o == "reader"),
            "predictions": str(out_path),
        }
    )
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    predictions = load_predictions(_require_file(args.predictions, "predictions"))
    dataset_path = _require_file(args.dataset, "dataset")
    dataset = load_squad(dataset_path)
    dataset_ids = {qa.id for qa in dataset.items()}
    extra = sorted(set(predictions) - dataset_ids)
    if extra:
        print(f"error: {len(extra)} prediction id(s) not in dataset: {extra[:5]}", file=sys.stderr)
        return EXIT_PARSE
    report = evaluate(predictions, dataset)
    for qid in report.missing:
        print(f"warning: no prediction for {qid}; scored 0", file=sys.stderr)
    payload = json.dumps(report.to_json(), ensure_ascii=False, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
        _print_json({"em_percent": report.em_percent, "f1_percent": report.f1_percent, "report": args.out})
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def cmd_inspect_kg(args: argparse.Namespace) -> int:
    kg = KnowledgeGraph.load(_require_file(args.graph, "graph"))
    subject = normalize_phrase(args.subject) if args.subject else None
    label = normalize_phrase(args.label) if args.label else None
    for triple in kg:
        if subject is not None and triple.subject != subject:
            continue
        if label is not None and triple.relation.label != label:
            continue
        _print_json(triple.to_record())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cskg-qa",
        description="Commonsense knowledge graph QA pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", help=f"config JSON path (default: ${CONFIG_ENV_VAR})")

    p = sub.add_parser("build-kg", help="build the knowledge graph from snapshot files")
    add_config(p)
    p.add_argument("--squad", help="SQuAD-format JSON snapshot")
    p.add_argument("--edges", help="related-term CSV snapshot")
    p.add_argument("--lexicon", help="synonym/definition TSV lexicon")
    p.add_argument("--definitions", help="term/definition TSV snapshot")
    p.add_argument("--graph", help="output graph JSONL path")
    p.add_argument("--report", help="output build report JSON path")
    p.add_argument("--min-df", dest="min_df", type=int)
    p.add_argument("--stopwords", help="stopword override file")
    p.add_argument("--dry-run", action="store_true", help="print the report; write nothing")
    p.set_defaults(func=cmd_build_kg)

    p = sub.add_parser("gen-dataset", help="generate perturbed questions")
    add_config(p)
    p.add_argument("input", help="input SQuAD-format JSON")
    p.add_argument("output", help="output SQuAD-format JSON")
    p.add_argument("--graph", help="graph JSONL path")
    p.add_argument("--sidecar", help="perturbation record JSONL path")
    p.add_argument("--max-per-question", dest="max_per_question", type=int)
    p.set_defaults(func=cmd_gen_dataset)

    p = sub.add_parser("answer", help="answer every question in a dataset")
    add_config(p)
    p.add_argument("--graph", help="graph JSONL path")
    p.add_argument("--dataset", required=True, help="SQuAD-format JSON to answer")
    p.add_argument("--out", required=True, help="predictions JSON output path")
    p.add_argument("--reader", help='"lexical" or an external reader command line')
    p.add_argument("--explain", help="write per-item trace JSONL here")
    p.add_argument("--resume", action="store_true", help="skip ids completed in a previous run")
    p.add_argument("--top-k", dest="top_k", type=int)
    p.add_argument("--timeout", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--stopwords", help="stopword override file")
    p.add_argument(
        "--resolve-synonyms",
        dest="resolve_synonyms",
        action="store_const",
        const=True,
        help="rewrite gated synonym mentions before the reader runs",
    )
    p.set_defaults(func=cmd_answer)

    p = sub.add_parser("eval", help="score predictions against a dataset")
    add_config(p)
    p.add_argument("--predictions", required=True, help="predictions JSON (id -> answer)")
    p.add_argument("--dataset", required=True, help="SQuAD-format JSON with gold answers")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("inspect-kg", help="print graph triples as JSONL")
    p.add_argument("--graph", required=True, help="graph JSONL path")
    p.add_argument("--subject", help="filter by subject")
    p.add_argument("--label", help="filter by relation label")
    p.set_defaults(func=cmd_inspect_kg)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ReaderCrashed, ReaderTimeout, ProtocolError) as exc:
        print(f"reader failure: {exc}", file=sys.stderr)
        return EXIT_READER
    except IoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CskgQaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
