/**
 * One in-isolation validation: casting pre-check, primal instrumentation,
 * covering-test execution, label classification.
 *
 * Labels:
 *   graal-success  every covering test passed with the bridge operative
 *   graal-fail     at least one covering test failed, bridge operative
 *   graal-error    the harness itself could not execute the case (types
 *                  outside the casting table, constructor replacement,
 *                  marshal failures, runtime setup problems)
 *
 * Infrastructure failures are read from the bridge's own event channel, so a
 * graal-error can never mask a genuine graal-fail.
 */

import { readFile } from "node:fs/promises";
import * as path from "node:path";

import { CastingTable, scanUserTypes } from "./casting.js";
import { methodNameOf, renderDualModule } from "./dual.js";
import { runPrimal, RuntimeConfig } from "./runtime.js";

export interface ValidateRequest {
  fragment_id: string;
  signature: string;
  class_qname: string;
  method_name: string;
  params: string[];
  return_type: string | null;
  is_static: boolean;
  translation: string;
  covering_tests: string[];
  repo: string;
}

export interface ValidateResponse {
  fragment_id: string;
  label: "graal-success" | "graal-fail" | "graal-error";
  log: string;
  failing_tests: string[];
}

async function walkJavaFiles(dir: string, out: string[]): Promise<void> {
  const { readdir } = await import("node:fs/promises");
  for (const entry of await readdir(dir, { withFileTypes: true })) {
    const full = path.join(dir, entry.name);
    if (entry.isDirectory()) {
      await walkJavaFiles(full, out);
    } else if (entry.name.endsWith(".java")) {
      out.push(full);
    }
  }
}

export async function collectUserClasses(repo: string): Promise<Map<string, string>> {
  const files: string[] = [];
  await walkJavaFiles(repo, files);
  const classes = new Map<string, string>();
  for (const file of files.sort()) {
    const text = await readFile(file, "utf-8");
    const pkg = text.match(/^\s*package\s+([\w.]+)\s*;/m)?.[1] ?? "";
    for (const name of scanUserTypes([text])) {
      classes.set(name, pkg ? `${pkg}.${name}` : name);
    }
  }
  return classes;
}

export async function validateInIsolation(
  config: RuntimeConfig,
  request: ValidateRequest,
): Promise<ValidateResponse> {
  const reply = (label: ValidateResponse["label"], log: string,
                 failing: string[] = []): ValidateResponse => ({
    fragment_id: request.fragment_id, label, log, failing_tests: failing,
  });

  if (!request.repo) {
    return reply("graal-error", "no source repository provided");
  }
  if (request.covering_tests.length === 0) {
    return reply("graal-error", "no covering source tests to execute");
  }
  const defName = methodNameOf(request.translation);
  if (defName === null) {
    return reply("graal-error", "translation has no function definition to bridge");
  }
  if (defName === "__init__") {
    return reply("graal-error", "constructor replacement is outside the supported subset");
  }

  let userClasses: Map<string, string>;
  try {
    userClasses = await collectUserClasses(request.repo);
  } catch (err) {
    return reply("graal-error", `cannot scan source repo: ${err}`);
  }
  const table = new CastingTable(new Set(userClasses.keys()));
  const unsupported = table.firstUnsupported(request.params, request.return_type);
  if (unsupported !== null) {
    return reply("graal-error",
      `boundary type outside the casting table: ${unsupported}`);
  }

  const dualSource = renderDualModule({
    signature: request.signature,
    classQname: request.class_qname,
    methodName: request.method_name,
    translation: request.translation,
    isStatic: request.is_static,
    userClasses,
  });
  const result = await runPrimal(config, {
    repo: request.repo,
    signature: request.signature,
    returnType: request.return_type,
    coveringTests: request.covering_tests,
    dualModuleSource: dualSource,
  });

  if (result.infraEvents.length > 0 || !result.ok) {
    return reply("graal-error",
      ["bridge infrastructure failure:", ...result.infraEvents, result.log]
        .join("\n").trim());
  }
  const failing = result.cases.filter((c) => c.status !== "pass");
  if (failing.length > 0) {
    const detail = failing
      .map((c) => `${c.id}: ${c.status} ${c.message}`)
      .concat(result.functionalEvents)
      .join("\n");
    return reply("graal-fail", detail, failing.map((c) => c.id));
  }
  if (result.cases.length === 0) {
    return reply("graal-error", "selected covering tests did not execute");
  }
  return reply("graal-success",
    `${result.cases.length} covering tests passed under the bridge`);
}
