/**
 * HTTP service implementing the shared /predict and /fill protocol.
 *
 * Returns 503 while models are loading and 422 on schema violations.
 * Inputs longer than maxInputTokens are truncated server-side and the
 * response carries an X-Astveil-Truncated header so the attacking
 * client can calibrate its own token limit. Backends run synchronously
 * on the event loop, which serializes requests into an implicit
 * single-model worker queue.
 */

import express from "express";
import { z } from "zod";
import { FillerBackend, MASK, VictimBackend, lexTokens } from "./backends.js";
import type { BridgeConfig } from "./config.js";

const predictRequest = z.object({
  code: z.string(),
  context: z.string().nullable(),
  language: z.enum(["python", "java", "c"]),
}).strict();

const fillRequest = z.object({
  text: z.string(),
  n: z.number().int().nonnegative(),
  language: z.enum(["python", "java", "c"]),
}).strict();

function truncateTokens(code: string, maxTokens: number): { text: string; truncated: boolean } {
  const tokens = lexTokens(code);
  if (tokens.length <= maxTokens) {
    return { text: code, truncated: false };
  }
  // cut at the byte position of the first token past the cap
  let count = 0;
  const re = /[A-Za-z_][A-Za-z0-9_]*|\d+|[^\sA-Za-z0-9_]/g;
  let match: RegExpExecArray | null;
  while ((match = re.exec(code)) !== null) {
    count += 1;
    if (count > maxTokens) {
      return { text: code.slice(0, match.index), truncated: true };
    }
  }
  return { text: code, truncated: false };
}

export interface BridgeState {
  ready: boolean;
  victim?: VictimBackend;
  filler?: FillerBackend;
}

export function createApp(config: BridgeConfig, state: BridgeState): express.Express {
  const app = express();
  app.use(express.json({ limit: "4mb" }));

  app.get("/healthz", (_req, res) => {
    res.status(state.ready ? 200 : 503).json({ ready: state.ready });
  });

  app.post("/predict", (req, res) => {
    if (!state.ready || !state.victim) {
      res.status(503).json({ error: "models loading" });
      return;
    }
    const parsed = predictRequest.safeParse(req.body);
    if (!parsed.success) {
      res.status(422).json({ error: "schema violation", detail: parsed.error.issues });
      return;
    }
    const { code, context } = parsed.data;
    const trimmed = truncateTokens(code, config.maxInputTokens);
    if (trimmed.truncated) {
      res.setHeader("X-Astveil-Truncated", "true");
    }
    const probs = state.victim.predict(trimmed.text, context);
    res.json({ probs });
  });

  app.post("/fill", (req, res) => {
    if (!state.ready || !state.filler) {
      res.status(503).json({ error: "models loading" });
      return;
    }
    const parsed = fillRequest.safeParse(req.body);
    if (!parsed.success) {
      res.status(422).json({ error: "schema violation", detail: parsed.error.issues });
      return;
    }
    const { text, n, language } = parsed.data;
    const trimmed = truncateTokens(text, config.maxInputTokens);
    if (trimmed.truncated && !trimmed.text.includes(MASK) && text.includes(MASK)) {
      // never truncate away the mask slots the client is asking about
      trimmed.text = text;
    }
    const fills = state.filler.fill(trimmed.text, n, language);
    res.json({ fills });
  });

  return app;
}
