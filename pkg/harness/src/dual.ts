/**
 * Dual-project generation.
 *
 * The dual project is the Python side of one in-isolation validation: it
 * holds exactly one real implementation - the translation under test - while
 * every other user class is a thin wrapper that forwards back into the primal
 * (source-side) runtime through the bridge API. The runtime injects that API
 * via bind_primal() before any test runs.
 */

export interface DualSpec {
  /** e.g. "minilib.core.Tokens#width(String)" */
  signature: string;
  classQname: string;
  methodName: string;
  translation: string;
  isStatic: boolean;
  userClasses: Map<string, string>; // simple name -> qualified name
}

const WRAPPER_TEMPLATE = `class {{simple}}:
    def __init__(self, *args):
        object.__setattr__(self, "_proxy", _PRIMAL.new_object("{{qname}}", list(args)))

    def __getattr__(self, name):
        return getattr(object.__getattribute__(self, "_proxy"), name)

    def __setattr__(self, name, value):
        setattr(object.__getattribute__(self, "_proxy"), name, value)
`;

export function stripDecorators(code: string): string {
  const lines = code.split("\n");
  while (lines.length > 0 && lines[0].trimStart().startsWith("@")) {
    lines.shift();
  }
  return lines.join("\n");
}

export function methodNameOf(translation: string): string | null {
  const match = stripDecorators(translation).match(/^\s*def\s+([A-Za-z_]\w*)\s*\(/m);
  return match ? match[1] : null;
}

export function renderDualModule(spec: DualSpec): string {
  const translation = stripDecorators(spec.translation).trimEnd();
  const defName = methodNameOf(spec.translation);
  const wrappers: string[] = [];
  // every user class gets a wrapper, including the one under test: static
  // factories and self-type constructions in the translation resolve through
  // it, while the method body itself runs against the bridged receiver
  for (const [simple, qname] of [...spec.userClasses.entries()].sort()) {
    if (simple === defName) continue; // avoid shadowing the entry point itself
    wrappers.push(
      WRAPPER_TEMPLATE.replace(/{{simple}}/g, simple).replace(/{{qname}}/g, qname),
    );
  }
  return [
    `"""Generated dual project for ${spec.signature}."""`,
    "",
    "_PRIMAL = None",
    "",
    "",
    "def bind_primal(bridge):",
    "    global _PRIMAL",
    "    _PRIMAL = bridge",
    "",
    "",
    wrappers.join("\n\n"),
    "",
    translation,
    "",
    "",
    `invoke = ${defName ?? spec.methodName}`,
    "",
  ].join("\n");
}
