/**
 * Control-protocol server: newline-delimited JSON request/response on stdio.
 *
 *   {"op":"ping"}                     -> {"op":"ping","ok":true,"runtime":...}
 *   {"op":"validate", ...request...}  -> {"op":"validate","fragment_id":...,
 *                                         "label":...,"log":...,"failing_tests":[...]}
 *   {"op":"shutdown"}                 -> {"op":"shutdown","ok":true} and exit
 *
 * The runtime location defaults to `python3` with the translation pipeline's
 * src/ directory on PYTHONPATH (resolved relative to this file); both are
 * overridable with ISOLATION_PYTHON / ISOLATION_PYTHONPATH.
 */

import * as path from "node:path";
import * as readline from "node:readline";
import { fileURLToPath } from "node:url";

import { RuntimeConfig } from "./runtime.js";
import { validateInIsolation, ValidateRequest } from "./validate.js";

export function defaultConfig(): RuntimeConfig {
  const here = path.dirname(fileURLToPath(import.meta.url));
  return {
    python: process.env.ISOLATION_PYTHON ?? "python3",
    pythonPath: process.env.ISOLATION_PYTHONPATH
      ?? path.resolve(here, "..", "..", "src"),
    timeoutMs: Number(process.env.ISOLATION_TIMEOUT_MS ?? 120000),
  };
}

export async function handleRequest(
  config: RuntimeConfig,
  request: Record<string, unknown>,
): Promise<Record<string, unknown>> {
  switch (request.op) {
    case "ping":
      return {
        op: "ping", ok: true,
        runtime: `${config.python} (javamini bridge runtime)`,
      };
    case "validate": {
      const reply = await validateInIsolation(config, request as unknown as ValidateRequest);
      return { op: "validate", ...reply };
    }
    case "shutdown":
      return { op: "shutdown", ok: true };
    default:
      return { op: String(request.op ?? "unknown"), error: "unsupported operation" };
  }
}

export function serve(config: RuntimeConfig = defaultConfig()): void {
  const rl = readline.createInterface({ input: process.stdin, terminal: false });
  let queue: Promise<void> = Promise.resolve();
  rl.on("line", (line) => {
    const text = line.trim();
    if (!text) return;
    queue = queue.then(async () => {
      let reply: Record<string, unknown>;
      let shutdown = false;
      try {
        const request = JSON.parse(text) as Record<string, unknown>;
        shutdown = request.op === "shutdown";
        reply = await handleRequest(config, request);
      } catch (err) {
        reply = { error: `malformed request: ${err}` };
      }
      process.stdout.write(JSON.stringify(reply) + "\n");
      if (shutdown) {
        rl.close();
        process.exit(0);
      }
    });
  });
}

const entry = process.argv[1] ? path.resolve(process.argv[1]) : "";
if (entry === fileURLToPath(import.meta.url)) {
  serve();
}
