import { readFileSync } from "node:fs";
import type { AddressInfo } from "node:net";
import { Server } from "node:http";
import { Ajv } from "ajv";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { loadFiller, loadVictim, MASK } from "../src/backends.js";
import { defaultConfig } from "../src/config.js";
import { BridgeState, createApp } from "../src/server.js";

const schema = JSON.parse(readFileSync(new URL("../../protocol.schema.json", import.meta.url), "utf-8"));
const ajv = new Ajv();
const validators = {
  predict_request: ajv.compile({ ...schema.$defs.predict_request, $defs: schema.$defs }),
  predict_response: ajv.compile({ ...schema.$defs.predict_response, $defs: schema.$defs }),
  fill_request: ajv.compile({ ...schema.$defs.fill_request, $defs: schema.$defs }),
  fill_response: ajv.compile({ ...schema.$defs.fill_response, $defs: schema.$defs }),
};

let server: Server;
let base: string;
const state: BridgeState = { ready: false };

beforeAll(async () => {
  const config = defaultConfig({ port: 0, maxInputTokens: 256 });
  const app = createApp(config, state);
  server = app.listen(0);
  const { port } = server.address() as AddressInfo;
  base = `http://127.0.0.1:${port}`;
  state.victim = await loadVictim(config.victim);
  state.filler = await loadFiller(config.filler);
  state.ready = true;
});

afterAll(() => {
  server.close();
});

async function post(path: string, body: unknown): Promise<Response> {
  return fetch(base + path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
}

function mulberry(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function fuzzCode(rand: () => number): string {
  const statements = ["int x = 1;", "while (x > 0) { x--; }", "y = y + x;", "if (x < 4) { y = 2; }", "return y;"];
  const count = 1 + Math.floor(rand() * 6);
  const lines: string[] = [];
  for (let i = 0; i < count; i++) {
    lines.push("    " + statements[Math.floor(rand() * statements.length)]);
  }
  return `int f() {\n${lines.join("\n")}\n}`;
}

describe("predict endpoint", () => {
  it("returns probabilities summing to 1 on 50 fuzzed inputs", async () => {
    const rand = mulberry(42);
    for (let i = 0; i < 50; i++) {
      const body = { code: fuzzCode(rand), context: null, language: "c" as const };
      expect(validators.predict_request(body)).toBe(true);
      const res = await post("/predict", body);
      expect(res.status).toBe(200);
      const data = await res.json();
      expect(validators.predict_response(data)).toBe(true);
      const total = data.probs.reduce((a: number, b: number) => a + b, 0);
      expect(Math.abs(total - 1)).toBeLessThanOrEqual(1e-6);
    }
  });

  it("flags server-side truncation with a header", async () => {
    const long = "x = 1; ".repeat(400);
    const res = await post("/predict", { code: long, context: null, language: "c" });
    expect(res.status).toBe(200);
    expect(res.headers.get("x-astveil-truncated")).toBe("true");
  });

  it("accepts pair context", async () => {
    const res = await post("/predict", {
      code: "int a;",
      context: "int b;",
      language: "c",
    });
    expect(res.status).toBe(200);
  });
});

describe("fill endpoint", () => {
  it("returns per-mask strings, in order, for 1-4 masks", async () => {
    for (let masks = 1; masks <= 4; masks++) {
      const slots = Array.from({ length: masks }, () => MASK).join(" + ");
      const body = { text: `int seed = 3;\nvalue = ${slots};`, n: 2, language: "c" as const };
      expect(validators.fill_request(body)).toBe(true);
      const res = await post("/fill", body);
      expect(res.status).toBe(200);
      const data = await res.json();
      expect(validators.fill_response(data)).toBe(true);
      expect(data.fills.length).toBeGreaterThanOrEqual(1);
      expect(data.fills.length).toBeLessThanOrEqual(2);
      for (const candidate of data.fills) {
        expect(candidate).toHaveLength(masks);
        for (const text of candidate) {
          expect(typeof text).toBe("string");
          expect(text.includes(MASK)).toBe(false);
        }
      }
    }
  });

  it("zero-mask text yields one candidate with an empty fills list", async () => {
    const res = await post("/fill", { text: "int x = 1;", n: 3, language: "c" });
    const data = await res.json();
    expect(data.fills).toEqual([[]]);
  });

  it("is deterministic per request", async () => {
    const body = { text: `int acc = 2;\nacc = ${MASK};`, n: 3, language: "c" };
    const a = await (await post("/fill", body)).json();
    const b = await (await post("/fill", body)).json();
    expect(a).toEqual(b);
  });
});

describe("protocol errors", () => {
  it("rejects schema violations with 422", async () => {
    const bad = [
      { code: 5, context: null, language: "c" },
      { code: "x", context: null, language: "rust" },
      { code: "x", context: null, language: "c", extra: true },
    ];
    for (const body of bad) {
      const res = await post("/predict", body);
      expect(res.status).toBe(422);
    }
    const res = await post("/fill", { text: "x", n: -1, language: "c" });
    expect(res.status).toBe(422);
  });

  it("returns 503 while models load", async () => {
    const config = defaultConfig({ port: 0 });
    const loading: BridgeState = { ready: false };
    const app = createApp(config, loading);
    const pending = app.listen(0);
    const { port } = pending.address() as AddressInfo;
    const res = await fetch(`http://127.0.0.1:${port}/predict`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ code: "x", context: null, language: "c" }),
    });
    expect(res.status).toBe(503);
    pending.close();
  });

  it("rejects unknown model kinds at load time", async () => {
    await expect(loadVictim({ kind: "nonexistent" })).rejects.toThrow();
    await expect(loadFiller({ kind: "nonexistent" })).rejects.toThrow();
  });
});

describe("recorded fixture replay", () => {
  it("answers every recorded primary request with a schema-valid response", async () => {
    const fixturePath = new URL("../../protocol_fixtures/requests.jsonl", import.meta.url);
    const lines = readFileSync(fixturePath, "utf-8").trim().split("\n");
    expect(lines.length).toBe(20);
    for (const line of lines) {
      const { path, body } = JSON.parse(line);
      const requestValidator = path === "/predict" ? validators.predict_request : validators.fill_request;
      expect(requestValidator(body)).toBe(true);
      const res = await post(path, body);
      expect(res.status).toBe(200);
      const data = await res.json();
      if (path === "/predict") {
        expect(validators.predict_response(data)).toBe(true);
        const total = data.probs.reduce((a: number, b: number) => a + b, 0);
        expect(Math.abs(total - 1)).toBeLessThanOrEqual(1e-6);
      } else {
        expect(validators.fill_response(data)).toBe(true);
        const masks = (body.text.match(/<MASK>/g) ?? []).length;
        for (const candidate of data.fills) {
          expect(candidate).toHaveLength(masks);
        }
      }
    }
  });
});
