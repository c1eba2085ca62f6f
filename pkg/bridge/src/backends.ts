/**
 * Model backends behind the wire protocol.
 *
 * The bridge is written against two tiny interfaces so a
 * transformer-backed implementation (sequence classifier + fill-mask
 * pipeline) can be plugged in per model id/path without touching the
 * HTTP layer. The bundled desk-scale backends are a lexical logistic
 * classifier loaded from a JSON weights file and an in-scope
 * identifier pool filler; both are deterministic.
 */

import { readFileSync } from "node:fs";
import type { ModelSpec } from "./config.js";

export const MASK = "<MASK>";

export interface VictimBackend {
  /** Class probabilities for a code sample (plus optional pair context). */
  predict(code: string, context: string | null): number[];
}

export interface FillerBackend {
  /** Up to n candidates, each one string per mask occurrence, in order. */
  fill(text: string, n: number, language: string): string[][];
}

interface LexicalModelFile {
  vocab: string[];
  weights: number[][]; // one row per class
  bias: number[];
}

const TOKEN_RE = /[A-Za-z_][A-Za-z0-9_]*|\d+|[^\sA-Za-z0-9_]/g;

export function lexTokens(code: string): string[] {
  return code.match(TOKEN_RE) ?? [];
}

function softmax(logits: number[]): number[] {
  const top = Math.max(...logits);
  const exps = logits.map((v) => Math.exp(v - top));
  const total = exps.reduce((a, b) => a + b, 0);
  return exps.map((v) => v / total);
}

export class LexicalLogisticVictim implements VictimBackend {
  private vocab: Map<string, number>;
  private weights: number[][];
  private bias: number[];

  constructor(model: LexicalModelFile) {
    if (!model.vocab || !model.weights || model.weights.length !== model.bias.length) {
      throw new Error("malformed victim model file");
    }
    this.vocab = new Map(model.vocab.map((tok, i) => [tok, i]));
    this.weights = model.weights;
    this.bias = model.bias;
  }

  private counts(code: string): number[] {
    const out = new Array(this.vocab.size).fill(0);
    for (const tok of lexTokens(code)) {
      const idx = this.vocab.get(tok);
      if (idx !== undefined) out[idx] += 1;
    }
    return out;
  }

  predict(code: string, context: string | null): number[] {
    const x = this.counts(code);
    if (context) {
      const extra = this.counts(context);
      for (let i = 0; i < x.length; i++) x[i] += extra[i];
    }
    const logits = this.weights.map(
      (row, c) => row.reduce((acc, w, i) => acc + w * x[i], this.bias[c]),
    );
    return softmax(logits);
  }
}

const KEYWORDS = new Set(
  ("auto break case char const continue default do double else enum extern float for goto if inline " +
    "int long register return short signed sizeof static struct switch typedef union unsigned void " +
    "volatile while bool true false null NULL class public private protected static final new this " +
    "def elif import from pass lambda not and or in is None True False MASK").split(" "),
);

const LITERAL_POOL = ["0", "1", '""'];
const CONTEXT_LINES = 20;

/** Deterministic PRNG so repeated requests give identical candidates. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function hashText(text: string): number {
  let h = 2166136261;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return h >>> 0;
}

export class PoolFiller implements FillerBackend {
  private pool(text: string, maskPos: number): string[] {
    let windowStart = maskPos;
    for (let i = 0; i < CONTEXT_LINES; i++) {
      const nl = text.lastIndexOf("\n", windowStart - 1);
      if (nl < 0) {
        windowStart = 0;
        break;
      }
      windowStart = nl;
    }
    const context = text.slice(windowStart, maskPos);
    const seen = new Map<string, number>();
    for (const match of context.matchAll(/[A-Za-z_][A-Za-z0-9_]*/g)) {
      const word = match[0];
      if (KEYWORDS.has(word)) continue;
      seen.set(word, match.index ?? 0);
    }
    const idents = [...seen.entries()]
      .sort((a, b) => b[1] - a[1] || (a[0] < b[0] ? -1 : 1))
      .map(([w]) => w);
    return [...idents, ...LITERAL_POOL];
  }

  fill(text: string, n: number, _language: string): string[][] {
    const positions: number[] = [];
    let at = text.indexOf(MASK);
    while (at >= 0) {
      positions.push(at);
      at = text.indexOf(MASK, at + MASK.length);
    }
    if (positions.length === 0) {
      return [[]];
    }
    const pools = positions.map((pos) => this.pool(text, pos));
    const rand = mulberry32(hashText(text));
    const results: string[][] = [];
    const seen = new Set<string>();
    for (let k = 0; k < Math.max(1, n); k++) {
      const texts =
        k === 0
          ? pools.map((pool) => pool[0])
          : pools.map((pool) => pool[Math.floor(rand() * pool.length)]);
      const key = JSON.stringify(texts);
      if (!seen.has(key)) {
        seen.add(key);
        results.push(texts);
      }
    }
    return results;
  }
}

export async function loadVictim(spec: ModelSpec): Promise<VictimBackend> {
  if (spec.kind === "lexical-logistic") {
    if (!spec.path) throw new Error("lexical-logistic victim needs a model path");
    const model = JSON.parse(readFileSync(spec.path, "utf-8")) as LexicalModelFile;
    return new LexicalLogisticVictim(model);
  }
  throw new Error(`unknown victim backend kind: ${spec.kind}`);
}

export async function loadFiller(spec: ModelSpec): Promise<FillerBackend> {
  if (spec.kind === "pool") {
    return new PoolFiller();
  }
  throw new Error(`unknown filler backend kind: ${spec.kind}`);
}
