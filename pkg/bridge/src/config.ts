import { readFileSync } from "node:fs";

/**
 * Inference-time limits.  Sequence lengths are approximate subword counts:
 * the real tokenizer owns the exact budget, the windowing layer only needs a
 * conservative estimate.
 */
export interface BridgeConfig {
  backend: "heuristic" | "transformer";
  model?: string;
  maxSeqLen: number;
  maxQueryLen: number;
  maxAnswerLen: number;
  topKDefault: number;
  device?: string;
}

export const DEFAULT_CONFIG: BridgeConfig = {
  backend: "heuristic",
  maxSeqLen: 384,
  maxQueryLen: 64,
  maxAnswerLen: 30,
  topKDefault: 20,
};

export function validateConfig(config: BridgeConfig): BridgeConfig {
  if (config.maxSeqLen <= 0 || config.maxQueryLen <= 0 || config.maxAnswerLen <= 0) {
    throw new Error("length limits must be positive");
  }
  if (config.maxQueryLen >= config.maxSeqLen) {
    throw new Error("maxQueryLen must be smaller than maxSeqLen");
  }
  if (config.topKDefault < 1) {
    throw new Error("topKDefault must be >= 1");
  }
  return config;
}

const FLAG_KEYS: Record<string, keyof BridgeConfig> = {
  "--backend": "backend",
  "--model": "model",
  "--max-seq-len": "maxSeqLen",
  "--max-query-len": "maxQueryLen",
  "--max-answer-len": "maxAnswerLen",
  "--top-k": "topKDefault",
  "--device": "device",
};

/** Build the config from an optional JSON file plus flags; flags win. */
export function parseArgs(argv: string[]): BridgeConfig {
  const config: BridgeConfig = { ...DEFAULT_CONFIG };
  const flagValues = new Map<keyof BridgeConfig, string>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--config") {
      const path = argv[++i];
      if (!path) throw new Error("--config requires a path");
      const fromFile = JSON.parse(readFileSync(path, "utf-8"));
      Object.assign(config, fromFile);
      continue;
    }
    const key = FLAG_KEYS[arg];
    if (!key) throw new Error(`unknown flag: ${arg}`);
    const value = argv[++i];
    if (value === undefined) throw new Error(`${arg} requires a value`);
    flagValues.set(key, value);
  }
  for (const [key, value] of flagValues) {
    if (key === "backend") {
      if (value !== "heuristic" && value !== "transformer") {
        throw new Error(`--backend must be "heuristic" or "transformer"`);
      }
      config.backend = value;
    } else if (key === "model" || key === "device") {
      config[key] = value;
    } else {
      const parsed = Number(value);
      if (!Number.isInteger(parsed)) throw new Error(`${key} must be an integer`);
      (config as unknown as Record<string, number>)[key] = parsed;
    }
  }
  if (config.model && !flagValues.has("backend") && config.backend === "heuristic") {
    config.backend = "transformer";
  }
  return validateConfig(config);
}
