from __future__ import annotations

import sys
from pathlib import Path

import pytest

from cskg_qa.build import BuildConfig, build_graph
from cskg_qa.graph import KnowledgeGraph, Relation, RelationKind, Triple

DATA_DIR = Path(__file__).parent / "data"
STUB_READER = Path(__file__).parent / "readers" / "stub_reader.py"

FUJI_CONTEXT = "The top of Mount Fuji is covered with snow."
FUJI_QUESTION = "What does the top of Mount Fuji have?"
FUJI_COLOR_QUESTION = "What color does the top of Mount Fuji have?"


def stub_reader_cmd(mode: str) -> list[str]:
    return [sys.executable, str(STUB_READER), mode]


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture()
def fixture_graph() -> KnowledgeGraph:
    """Small hand-inserted graph mirroring the snapshot build output."""
    kg = KnowledgeGraph()
    kg.insert(Triple("snow", Relation(RelationKind.ATTRIBUTE, "color"), "white", "fixture"))
    kg.insert(Triple("snow", Relation(RelationKind.ATTRIBUTE, "temperature"), "cold", "fixture", 0.8))
    kg.insert(Triple("grass", Relation(RelationKind.ATTRIBUTE, "color"), "green", "fixture", 0.9))
    kg.insert(
        Triple("laptop", Relation(RelationKind.SYNONYM, "computing devices"), "notebook", "fixture")
    )
    kg.insert(Triple("decade", Relation(RelationKind.DEFINITION), "a period of ten years", "fixture"))
    return kg


@pytest.fixture(scope="session")
def built_graph() -> KnowledgeGraph:
    """Graph produced by the real snapshot pipeline over tests/data."""
    config = BuildConfig(
        squad_path=str(DATA_DIR / "squad_fixture.json"),
        edges_path=str(DATA_DIR / "edges.csv"),
        lexicon_path=str(DATA_DIR / "lexicon.tsv"),
        definitions_path=str(DATA_DIR / "definitions.tsv"),
        min_df=1,
    )
    kg, _ = build_graph(config)
    return kg
