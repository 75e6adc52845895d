import { parseArgs } from "./config.js";
import { HeuristicScorer } from "./heuristic.js";
import { serve } from "./server.js";
import { TransformerScorer } from "./transformer.js";
import type { SpanScorer } from "./backend.js";

async function main(): Promise<number> {
  let config;
  try {
    config = parseArgs(process.argv.slice(2));
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }

  let scorer: SpanScorer;
  if (config.backend === "transformer") {
    if (!config.model) {
      process.stderr.write("error: transformer backend requires --model\n");
      return 2;
    }
    try {
      scorer = await TransformerScorer.load(config.model, config.device);
    } catch (err) {
      process.stderr.write(`error: ${(err as Error).message}\n`);
      return 2;
    }
  } else {
    scorer = new HeuristicScorer();
  }

  await serve(scorer, config, process.stdin, process.stdout);
  return 0;
}

main().then(
  (code) => process.exit(code),
  (err) => {
    process.stderr.write(`fatal: ${err?.stack ?? err}\n`);
    process.exit(1);
  },
);
