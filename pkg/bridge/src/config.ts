import { existsSync, readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { z } from "zod";

const modelSpec = z.object({
  kind: z.string(),
  path: z.string().optional(),
});

const configSchema = z.object({
  victim: modelSpec,
  filler: modelSpec,
  device: z.string().default("cpu"),
  maxInputTokens: z.number().int().positive().default(512),
  port: z.number().int().nonnegative().default(8781),
});

export type ModelSpec = z.infer<typeof modelSpec>;
export type BridgeConfig = z.infer<typeof configSchema>;

export function loadConfig(path: string): BridgeConfig {
  const raw = JSON.parse(readFileSync(path, "utf-8"));
  return configSchema.parse(raw);
}

function demoModelPath(): string {
  // works from both src/ (ts-node) and dist/src/ (compiled)
  for (const rel of ["../models/victim.demo.json", "../../models/victim.demo.json"]) {
    const candidate = fileURLToPath(new URL(rel, import.meta.url));
    if (existsSync(candidate)) {
      return candidate;
    }
  }
  throw new Error("bundled demo victim model not found");
}

export function defaultConfig(overrides: Partial<BridgeConfig> = {}): BridgeConfig {
  return configSchema.parse({
    victim: { kind: "lexical-logistic", path: demoModelPath() },
    filler: { kind: "pool" },
    ...overrides,
  });
}
