/**
 * Sliding-window splitting for contexts whose subword length exceeds the
 * model budget.  Windows are word-aligned, overlap by a stride, and carry the
 * character offset of their first character so span offsets map back to the
 * original context exactly.
 */

export interface Window {
  text: string;
  /** Character offset of window.text[0] in the original context. */
  offset: number;
}

interface Word {
  start: number;
  end: number;
  tokens: number;
}

/**
 * Conservative subword-count estimate: one token per ~4 characters of each
 * whitespace-delimited word, minimum one.  Overestimating shrinks windows,
 * which is safe; underestimating would overflow the model budget.
 */
export function approxTokenCount(text: string): number {
  let total = 0;
  for (const match of text.matchAll(/\S+/g)) {
    total += Math.max(1, Math.ceil(match[0].length / 4));
  }
  return total;
}

function words(text: string): Word[] {
  const out: Word[] = [];
  for (const match of text.matchAll(/\S+/g)) {
    out.push({
      start: match.index!,
      end: match.index! + match[0].length,
      tokens: Math.max(1, Math.ceil(match[0].length / 4)),
    });
  }
  return out;
}

/**
 * Split `context` into overlapping windows of at most `budget` estimated
 * tokens.  `stride` is the token overlap between consecutive windows, so an
 * answer split by one boundary is intact in the neighboring window.
 */
export function slideWindows(context: string, budget: number, stride: number): Window[] {
  if (budget <= 0) throw new Error("window budget must be positive");
  const effectiveStride = Math.min(Math.max(0, stride), budget - 1);
  const allWords = words(context);
  if (allWords.length === 0) {
    return [{ text: context, offset: 0 }];
  }

  const windows: Window[] = [];
  let wordIndex = 0;
  while (wordIndex < allWords.length) {
    let tokens = 0;
    let last = wordIndex;
    while (last < allWords.length) {
      const next = tokens + allWords[last].tokens;
      if (last > wordIndex && next > budget) break;
      tokens = next;
      last++;
    }
    const start = allWords[wordIndex].start;
    const end = allWords[last - 1].end;
    windows.push({ text: context.slice(start, end), offset: start });
    if (last >= allWords.length) break;

    // Walk back over ~stride tokens of overlap for the next window start.
    let overlap = 0;
    let nextIndex = last;
    while (nextIndex > wordIndex + 1 && overlap < effectiveStride) {
      nextIndex--;
      overlap += allWords[nextIndex].tokens;
    }
    wordIndex = nextIndex;
  }
  return windows;
}
