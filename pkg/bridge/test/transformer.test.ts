import { execFileSync } from "node:child_process";
import { mkdtempSync, writeFileSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

/**
 * Directional check against a real SQuAD-fine-tuned checkpoint, driven
 * through the Python pipeline's external interfaces (CLI + wire protocol).
 *
 * Requires BRIDGE_MODEL (a transformers.js-compatible QA checkpoint id or
 * local path).  The hosting environment for CI has no model hub access, so
 * without BRIDGE_MODEL this suite reports itself as skipped; the protocol
 * conformance suite in golden.test.ts runs everywhere.
 */

const MODEL = process.env.BRIDGE_MODEL;
const BRIDGE_DIR = join(dirname(fileURLToPath(import.meta.url)), "..");
const REPO_ROOT = join(BRIDGE_DIR, "..");
const PYTHON = process.env.PYTHON ?? "python3";

const SUBJECT_TRIPLES: Array<[string, string, string]> = [
  ["snow", "color", "white"],
  ["ice", "temperature", "cold"],
  ["lava", "temperature", "hot"],
  ["moss", "color", "green"],
  ["dust", "size", "tiny"],
  ["honey", "taste", "sweet"],
  ["lead", "weight", "heavy"],
  ["silk", "material", "fabric"],
  ["fog", "height", "low"],
  ["steam", "speed", "fast"],
];

const FRAMES: Array<[string, string]> = [
  ["top", "tower"],
  ["floor", "cave"],
  ["roof", "barn"],
  ["edge", "cliff"],
  ["rim", "valley"],
];

function writeOriginals(path: string): void {
  const paragraphs = [];
  for (const [subject] of SUBJECT_TRIPLES) {
    for (const [part, place] of FRAMES) {
      const context = `The ${part} of the ${place} is covered with ${subject}.`;
      paragraphs.push({
        context,
        qas: [
          {
            id: `${subject}-${part}-${place}`,
            question: `What does the ${part} of the ${place} have?`,
            answers: [{ text: subject, answer_start: context.indexOf(subject) }],
          },
        ],
      });
    }
  }
  const payload = { version: "1.1", data: [{ title: "originals", paragraphs }] };
  writeFileSync(path, JSON.stringify(payload));
}

function writeGraph(path: string, triples: Array<[string, string, string]>): void {
  const lines = triples.map(([subject, label, object]) =>
    JSON.stringify({
      subject,
      kind: "attribute",
      label,
      object,
      provenance: "bridge-test",
      weight: 1.0,
    }),
  );
  writeFileSync(path, lines.map((l) => l + "\n").join(""));
}

function pythonCli(args: string[]): string {
  return execFileSync(PYTHON, ["-m", "cskg_qa", ...args], {
    cwd: REPO_ROOT,
    env: { ...process.env, PYTHONPATH: join(REPO_ROOT, "src") },
    encoding: "utf-8",
    stdio: ["ignore", "pipe", "inherit"],
  });
}

describe.skipIf(!MODEL)("directional degradation with a pinned checkpoint", () => {
  it(
    "drops at least 10 F1 on perturbed questions and the resolver recovers half the gap",
    { timeout: 1_800_000 },
    () => {
      const work = mkdtempSync(join(tmpdir(), "bridge-directional-"));
      const originals = join(work, "originals.json");
      const perturbed = join(work, "perturbed.json");
      const graph = join(work, "kg.jsonl");
      const emptyGraph = join(work, "empty.jsonl");
      writeOriginals(originals);
      writeGraph(graph, SUBJECT_TRIPLES);
      writeFileSync(emptyGraph, "");

      pythonCli(["gen-dataset", originals, perturbed, "--graph", graph]);

      const readerCmd = `node ${join(BRIDGE_DIR, "dist", "main.js")} --backend transformer --model ${MODEL}`;
      const f1 = (dataset: string, graphPath: string, tag: string): number => {
        const predictions = join(work, `pred-${tag}.json`);
        pythonCli([
          "answer",
          "--graph", graphPath,
          "--dataset", dataset,
          "--out", predictions,
          "--reader", readerCmd,
          "--workers", "1",
          "--timeout", "600",
        ]);
        const report = JSON.parse(
          pythonCli(["eval", "--predictions", predictions, "--dataset", dataset]),
        );
        return report.f1_percent as number;
      };

      // Empty graph: the gate never opens, so this is the reader alone.
      const baselineOriginals = f1(originals, emptyGraph, "orig");
      const baselinePerturbed = f1(perturbed, emptyGraph, "pert");
      const resolverPerturbed = f1(perturbed, graph, "resolved");

      expect(JSON.parse(readFileSync(perturbed, "utf-8")).data.length).toBeGreaterThan(0);
      expect(baselineOriginals - baselinePerturbed).toBeGreaterThanOrEqual(10);
      expect(resolverPerturbed).toBeGreaterThanOrEqual(
        baselinePerturbed + (baselineOriginals - baselinePerturbed) / 2,
      );
    },
  );
});

describe.skipIf(Boolean(MODEL))("checkpoint availability", () => {
  it.skip("BRIDGE_MODEL not set: no model hub reachable from this environment", () => {
    // Intentionally skipped; see the repository notes on why no checkpoint
    // can be fetched here. Set BRIDGE_MODEL to run the directional suite.
  });
});
