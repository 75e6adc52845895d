"""Primary pipeline driving the Node bridge through the wire protocol.

Runs only when the bridge is built (bridge/dist/main.js) and node is on PATH;
the bridge's own vitest suite covers protocol conformance in depth.
"""

from __future__ import annotations

import shutil
from pathlib import Path

import pytest

from conftest import FUJI_COLOR_QUESTION, FUJI_CONTEXT, FUJI_QUESTION
from cskg_qa.reader import ExternalReader
from cskg_qa.resolve import resolve

BRIDGE_MAIN = Path(__file__).resolve().parents[1] / "bridge" / "dist" / "main.js"

pytestmark = pytest.mark.skipif(
    shutil.which("node") is None or not BRIDGE_MAIN.is_file(),
    reason="node or built bridge not available",
)


def bridge_cmd() -> list[str]:
    return ["node", str(BRIDGE_MAIN)]


def test_ping_and_read():
    with ExternalReader(bridge_cmd(), timeout=30) as reader:
        reader.ping()
        candidates = reader.read(FUJI_CONTEXT, FUJI_QUESTION, top_k=5)
    assert candidates
    assert candidates[0].text == "snow"
    for c in candidates:
        assert FUJI_CONTEXT[c.char_start : c.char_end] == c.text


def test_resolver_over_bridge(fixture_graph):
    with ExternalReader(bridge_cmd(), timeout=30) as reader:
        knowledge = resolve(FUJI_CONTEXT, FUJI_COLOR_QUESTION, fixture_graph, reader)
        plain = resolve(FUJI_CONTEXT, FUJI_QUESTION, fixture_graph, reader)
    assert knowledge.text == "white"
    assert knowledge.origin == "knowledge"
    assert plain.text == "snow"
    assert plain.origin == "reader"


def test_bridge_survives_many_requests():
    with ExternalReader(bridge_cmd(), timeout=30) as reader:
        for i in range(10):
            candidates = reader.read(f"Item {i} sits on the shelf.", "What sits?", top_k=3)
            assert candidates
