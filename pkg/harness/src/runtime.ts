/**
 * Invocation of the polyglot-capable runtime: the source-language interpreter
 * run in bridge mode, where one method's body is replaced by a call into the
 * dual project's Python implementation.
 *
 * A primal run needs: the source repo, the covering test selection, the
 * bridge config pointing at the generated dual module, and somewhere to put
 * the XML report and the bridge event log. Marshal failures surface on the
 * bridge log, a channel separate from test results, so infrastructure
 * problems never masquerade as functional failures.
 */

import { spawn } from "node:child_process";
import { mkdtemp, readFile, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import * as path from "node:path";

export interface RuntimeConfig {
  python: string; // interpreter executable
  pythonPath: string; // directory containing the fragport package
  timeoutMs: number;
}

export interface PrimalRunRequest {
  repo: string;
  signature: string;
  returnType: string | null;
  coveringTests: string[];
  dualModuleSource: string;
}

export interface TestCase {
  id: string;
  status: "pass" | "fail" | "error";
  message: string;
}

export interface PrimalRunResult {
  ok: boolean; // the runtime itself ran (exit 0/1)
  cases: TestCase[];
  infraEvents: string[]; // marshal/bridge-setup failures
  functionalEvents: string[]; // exceptions raised by the translation
  log: string;
}

export async function runPrimal(
  config: RuntimeConfig,
  request: PrimalRunRequest,
): Promise<PrimalRunResult> {
  const workDir = await mkdtemp(path.join(tmpdir(), "isolation-"));
  try {
    const dualPath = path.join(workDir, "dual_entry.py");
    await writeFile(dualPath, request.dualModuleSource, "utf-8");
    const bridgeConfig = {
      target: request.signature,
      dual_dir: workDir,
      module: "dual_entry",
      callable: "invoke",
      return_type: simpleReturn(request.returnType),
    };
    const bridgePath = path.join(workDir, "bridge.json");
    await writeFile(bridgePath, JSON.stringify(bridgeConfig), "utf-8");
    const xmlPath = path.join(workDir, "report.xml");
    const logPath = path.join(workDir, "bridge_log.json");

    const args = [
      "-m", "fragport.javamini.runner",
      "--repo", request.repo,
      "--xml-out", xmlPath,
      "--bridge", bridgePath,
      "--bridge-log", logPath,
    ];
    if (request.coveringTests.length > 0) {
      args.push("--tests", request.coveringTests.join(","));
    }
    const { code, stdout, stderr } = await run(config, args);

    const infraEvents: string[] = [];
    const functionalEvents: string[] = [];
    try {
      const logDoc = JSON.parse(await readFile(logPath, "utf-8"));
      for (const event of logDoc.events ?? []) {
        const line = `${event.event}: ${event.detail}`;
        if (event.event === "foreign-exception") {
          functionalEvents.push(line);
        } else {
          infraEvents.push(line);
        }
      }
    } catch {
      // no log file means no bridge events
    }

    if (code === 2) {
      return {
        ok: false, cases: [], infraEvents:
          infraEvents.length ? infraEvents : [`runtime setup failed: ${stderr.trim()}`],
        functionalEvents, log: stdout + stderr,
      };
    }
    let cases: TestCase[] = [];
    try {
      cases = parseJUnitXml(await readFile(xmlPath, "utf-8"));
    } catch {
      return {
        ok: false, cases: [], infraEvents: [...infraEvents, "no XML report produced"],
        functionalEvents, log: stdout + stderr,
      };
    }
    return { ok: true, cases, infraEvents, functionalEvents, log: stdout };
  } finally {
    await rm(workDir, { recursive: true, force: true });
  }
}

function simpleReturn(returnType: string | null): string {
  if (!returnType) return "";
  return returnType.includes(".")
    ? returnType.slice(returnType.lastIndexOf(".") + 1)
    : returnType;
}

function run(
  config: RuntimeConfig,
  args: string[],
): Promise<{ code: number; stdout: string; stderr: string }> {
  return new Promise((resolve, reject) => {
    const child = spawn(config.python, args, {
      env: {
        ...process.env,
        PYTHONPATH: config.pythonPath +
          (process.env.PYTHONPATH ? path.delimiter + process.env.PYTHONPATH : ""),
      },
    });
    let stdout = "";
    let stderr = "";
    child.stdout.on("data", (chunk) => (stdout += chunk));
    child.stderr.on("data", (chunk) => (stderr += chunk));
    const timer = setTimeout(() => {
      child.kill("SIGKILL");
      resolve({ code: 2, stdout, stderr: stderr + "\n(runtime timed out)" });
    }, config.timeoutMs);
    child.on("error", (err) => {
      clearTimeout(timer);
      reject(err);
    });
    child.on("close", (code) => {
      clearTimeout(timer);
      resolve({ code: code ?? 2, stdout, stderr });
    });
  });
}

/** Minimal reader for the runtime's own JUnit-style XML (a stable shape). */
export function parseJUnitXml(xml: string): TestCase[] {
  const cases: TestCase[] = [];
  const pattern =
    /<testcase\b[^>]*classname="([^"]*)"[^>]*name="([^"]*)"[^>]*?(\/>|>([\s\S]*?)<\/testcase>)/g;
  for (const match of xml.matchAll(pattern)) {
    const id = `${decodeEntities(match[1])}#${decodeEntities(match[2])}`;
    const inner = match[4] ?? "";
    let status: TestCase["status"] = "pass";
    let message = "";
    const failure = inner.match(/<(failure|error)\b[^>]*message="([^"]*)"/);
    if (failure) {
      status = failure[1] === "failure" ? "fail" : "error";
      message = decodeEntities(failure[2]);
    }
    cases.push({ id, status, message });
  }
  return cases;
}

function decodeEntities(text: string): string {
  return text
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&quot;/g, '"')
    .replace(/&#10;/g, "\n")
    .replace(/&amp;/g, "&");
}
