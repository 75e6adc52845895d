import type { SpanScorer } from "./backend.js";
import type { AnswerSpan } from "./protocol.js";

/**
 * Deterministic lexical span scorer: no model, no I/O, no randomness.
 *
 * Sentences are ranked by content-word overlap with the question; candidate
 * spans are maximal runs of tokens that are neither stopwords nor question
 * words, scored by sentence overlap plus a small length bonus.  It exists so
 * the protocol layer is fully testable without a checkpoint; it makes no
 * claim to model quality.
 */

const STOPWORDS = new Set(
  (
    "a an the and or but if then else of in on at by for with about over under to from " +
    "is are was were be been being am do does did have has had having will would can " +
    "could shall should may might must it its this that these those he she they them " +
    "his her their we you i me my your our us what which who whom whose when where why " +
    "how not no nor so too very there here as than because while during before after " +
    "all any both each few more most other some such only own same just up down out off"
  ).split(/\s+/),
);

interface Token {
  surface: string;
  start: number;
  end: number;
}

function tokenize(text: string): Token[] {
  const out: Token[] = [];
  for (const match of text.matchAll(/[\p{L}\p{N}]+/gu)) {
    out.push({
      surface: match[0].toLowerCase(),
      start: match.index!,
      end: match.index! + match[0].length,
    });
  }
  return out;
}

function sentenceSpans(text: string): Array<{ start: number; end: number }> {
  const spans: Array<{ start: number; end: number }> = [];
  let start = 0;
  const boundary = /[.?!]+(?=\s|$)/g;
  for (const match of text.matchAll(boundary)) {
    spans.push({ start, end: match.index! + match[0].length });
    start = match.index! + match[0].length;
  }
  if (start < text.length) spans.push({ start, end: text.length });
  return spans.filter((s) => text.slice(s.start, s.end).trim().length > 0);
}

function jaccard(a: Set<string>, b: Set<string>): number {
  if (a.size === 0 && b.size === 0) return 0;
  let intersection = 0;
  for (const item of a) if (b.has(item)) intersection++;
  return intersection / (a.size + b.size - intersection);
}

export class HeuristicScorer implements SpanScorer {
  async scoreSpans(question: string, windowText: string, topK: number): Promise<AnswerSpan[]> {
    const questionWords = new Set(
      tokenize(question)
        .map((t) => t.surface)
        .filter((s) => !STOPWORDS.has(s)),
    );

    const spans: AnswerSpan[] = [];
    for (const sentence of sentenceSpans(windowText)) {
      const tokens = tokenize(windowText.slice(sentence.start, sentence.end));
      const sentenceWords = new Set(
        tokens.map((t) => t.surface).filter((s) => !STOPWORDS.has(s)),
      );
      const sentenceScore = jaccard(questionWords, sentenceWords);

      let run: Token[] = [];
      const flush = () => {
        if (run.length === 0) return;
        const start = sentence.start + run[0].start;
        const end = sentence.start + run[run.length - 1].end;
        spans.push({
          text: windowText.slice(start, end),
          char_start: start,
          char_end: end,
          score: sentenceScore + 0.001 * run.length,
        });
        run = [];
      };
      for (const token of tokens) {
        if (STOPWORDS.has(token.surface) || questionWords.has(token.surface)) {
          flush();
        } else {
          run.push(token);
        }
      }
      flush();
    }
    spans.sort((a, b) => b.score - a.score || b.char_start - a.char_start);
    return spans.slice(0, topK);
  }
}
