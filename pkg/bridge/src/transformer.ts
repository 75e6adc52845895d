import type { SpanScorer } from "./backend.js";
import type { AnswerSpan } from "./protocol.js";

/**
 * Extractive QA over a pretrained transformer checkpoint via
 * `@xenova/transformers` (ONNX runtime, no Python).  The dependency is
 * imported dynamically: installs without it still run the heuristic scorer.
 *
 * Reference fine-tuning setup for the checkpoints this backend expects
 * (recorded for documentation; training is out of scope here): BERT-base
 * uncased, 3 epochs, batch size 4, Adam at lr 5e-5, sequence budget
 * 384/64/30 WordPiece tokens.
 */

interface QaPipeline {
  (question: string, context: string, options: { top_k: number }): Promise<
    Array<{ answer: string; score: number; start?: number; end?: number }>
  >;
}

export class TransformerScorer implements SpanScorer {
  private constructor(private readonly pipeline: QaPipeline) {}

  static async load(model: string, device?: string): Promise<TransformerScorer> {
    let transformers: {
      pipeline: (task: string, model: string, options?: object) => Promise<unknown>;
    };
    // The module name goes through a variable so tsc does not demand the
    // optional package (and its types) at build time.
    const moduleName = "@xenova/transformers";
    try {
      transformers = await import(moduleName);
    } catch {
      throw new Error(
        "transformer backend requires the optional '@xenova/transformers' package; " +
          "install it or run with --backend heuristic",
      );
    }
    const options: Record<string, unknown> = {};
    if (device) options.device = device;
    const qa = (await transformers.pipeline("question-answering", model, options)) as QaPipeline;
    return new TransformerScorer(qa);
  }

  async scoreSpans(question: string, windowText: string, topK: number): Promise<AnswerSpan[]> {
    const raw = await this.pipeline(question, windowText, { top_k: topK });
    const results = Array.isArray(raw) ? raw : [raw];
    const spans: AnswerSpan[] = [];
    for (const result of results) {
      if (!result || typeof result.answer !== "string" || result.answer.length === 0) continue;
      let start = typeof result.start === "number" ? result.start : -1;
      let end = typeof result.end === "number" ? result.end : -1;
      if (start < 0 || end <= start || windowText.slice(start, end) !== result.answer) {
        // Offsets drift through detokenization; recover by first occurrence.
        start = windowText.indexOf(result.answer);
        if (start < 0) continue;
        end = start + result.answer.length;
      }
      spans.push({
        text: windowText.slice(start, end),
        char_start: start,
        char_end: end,
        score: result.score,
      });
    }
    return spans;
  }
}
