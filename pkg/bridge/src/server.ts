import { createInterface } from "node:readline";
import type { Readable, Writable } from "node:stream";

import { answerWithWindows, type SpanScorer } from "./backend.js";
import type { BridgeConfig } from "./config.js";
import {
  encodeResponse,
  parseRequestLine,
  pingResponse,
  RequestError,
} from "./protocol.js";

/**
 * Serve the line protocol until the input stream closes.  One request is in
 * flight at a time; responses preserve request order.  A malformed request
 * produces an error line and the process stays alive.
 */
export async function serve(
  scorer: SpanScorer,
  config: BridgeConfig,
  input: Readable,
  output: Writable,
): Promise<void> {
  const lines = createInterface({ input, crlfDelay: Infinity });
  let chain: Promise<void> = Promise.resolve();

  const handle = async (line: string): Promise<void> => {
    if (line.trim().length === 0) return;
    try {
      const request = parseRequestLine(line, config.topKDefault);
      if ("ping" in request) {
        output.write(encodeResponse(pingResponse()));
        return;
      }
      const answers = await answerWithWindows(
        scorer,
        request.question,
        request.context,
        request.top_k,
        config,
      );
      output.write(encodeResponse({ id: request.id, answers }));
    } catch (err) {
      const id = err instanceof RequestError ? err.requestId : null;
      const message = err instanceof Error ? err.message : String(err);
      output.write(encodeResponse({ id, error: message }));
    }
  };

  await new Promise<void>((resolvePromise) => {
    lines.on("line", (line) => {
      chain = chain.then(() => handle(line));
    });
    lines.on("close", () => {
      chain.then(() => resolvePromise());
    });
  });
}
