import type { BridgeConfig } from "./config.js";
import type { AnswerSpan } from "./protocol.js";
import { approxTokenCount, slideWindows } from "./windows.js";

/** A backend scores candidate spans inside one window of context. */
export interface SpanScorer {
  /** Spans with offsets relative to `windowText`; any order, any count. */
  scoreSpans(question: string, windowText: string, topK: number): Promise<AnswerSpan[]>;
}

const WINDOW_STRIDE = 64;

function truncateQuestion(question: string, maxQueryTokens: number): string {
  const matches = [...question.matchAll(/\S+/g)];
  let tokens = 0;
  for (const match of matches) {
    tokens += Math.max(1, Math.ceil(match[0].length / 4));
    if (tokens > maxQueryTokens) {
      return question.slice(0, match.index!).trimEnd();
    }
  }
  return question;
}

/**
 * Run a scorer over sliding windows of the context and assemble the final
 * answer list: offsets mapped to the original context, slice invariant
 * enforced, duplicates collapsed to their best score, answers longer than
 * the answer budget dropped, descending score order, at most topK entries.
 */
export async function answerWithWindows(
  scorer: SpanScorer,
  question: string,
  context: string,
  topK: number,
  config: BridgeConfig,
): Promise<AnswerSpan[]> {
  const budget = Math.max(1, config.maxSeqLen - config.maxQueryLen - 3);
  const query = truncateQuestion(question, config.maxQueryLen);
  const windows =
    approxTokenCount(context) <= budget
      ? [{ text: context, offset: 0 }]
      : slideWindows(context, budget, WINDOW_STRIDE);

  const best = new Map<string, AnswerSpan>();
  for (const window of windows) {
    const spans = await scorer.scoreSpans(query, window.text, topK);
    for (const span of spans) {
      const start = span.char_start + window.offset;
      const end = span.char_end + window.offset;
      if (start < 0 || end > context.length || start >= end) continue;
      const text = context.slice(start, end);
      if (text !== span.text) continue; // slice invariant is non-negotiable
      if (approxTokenCount(text) > config.maxAnswerLen) continue;
      const key = `${start}:${end}`;
      const existing = best.get(key);
      if (!existing || span.score > existing.score) {
        best.set(key, { text, char_start: start, char_end: end, score: span.score });
      }
    }
  }
  const merged = [...best.values()];
  merged.sort((a, b) => b.score - a.score || b.char_start - a.char_start);
  return merged.slice(0, topK);
}
