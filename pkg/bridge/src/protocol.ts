/**
 * Wire protocol: one UTF-8 JSON object per line, LF-terminated, no pretty
 * printing.  Requests carry "id", "question", "context", "top_k"; responses
 * echo the id and carry "answers" ordered by descending score.  The line
 * {"id":"__ping__"} is a health check answered with an empty answer list.
 */

export const PING_ID = "__ping__";

export interface AnswerSpan {
  text: string;
  char_start: number;
  char_end: number;
  score: number;
}

export interface ReaderRequest {
  id: string;
  question: string;
  context: string;
  top_k: number;
}

export interface ReaderResponse {
  id: string;
  answers: AnswerSpan[];
}

export interface ErrorResponse {
  id: string | null;
  error: string;
}

export class RequestError extends Error {
  constructor(
    message: string,
    public readonly requestId: string | null,
  ) {
    super(message);
    this.name = "RequestError";
  }
}

function extractId(value: unknown): string | null {
  if (typeof value === "object" && value !== null) {
    const id = (value as Record<string, unknown>)["id"];
    if (typeof id === "string") return id;
  }
  return null;
}

/** Parse one request line; throws RequestError carrying any echoable id. */
export function parseRequestLine(
  line: string,
  defaultTopK = 20,
): ReaderRequest | { ping: true } {
  let value: unknown;
  try {
    value = JSON.parse(line);
  } catch (err) {
    throw new RequestError(`malformed JSON: ${(err as Error).message}`, null);
  }
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new RequestError("request must be a JSON object", null);
  }
  const obj = value as Record<string, unknown>;
  const id = extractId(obj);
  if (id === PING_ID) {
    return { ping: true };
  }
  if (typeof obj.id !== "string" || obj.id.length === 0) {
    throw new RequestError("missing request id", null);
  }
  if (typeof obj.question !== "string" || obj.question.trim().length === 0) {
    throw new RequestError("missing or empty 'question'", id);
  }
  if (typeof obj.context !== "string" || obj.context.trim().length === 0) {
    throw new RequestError("missing or empty 'context'", id);
  }
  const topK = obj.top_k === undefined ? defaultTopK : obj.top_k;
  if (typeof topK !== "number" || !Number.isInteger(topK) || topK < 1) {
    throw new RequestError("'top_k' must be an integer >= 1", id);
  }
  return { id: obj.id, question: obj.question, context: obj.context, top_k: topK };
}

export function encodeResponse(response: ReaderResponse | ErrorResponse): string {
  return JSON.stringify(response) + "\n";
}

export function pingResponse(): ReaderResponse {
  return { id: PING_ID, answers: [] };
}
