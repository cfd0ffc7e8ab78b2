/**
 * Boundary casting rules for in-isolation validation.
 *
 * Values crossing between the source runtime and the translated Python code
 * must have types from this table: primitives, strings, homogeneous lists of
 * supported element types, and user-declared classes (proxied by reference).
 * Anything else - `Object`, maps, raw generics - is out of scope and the
 * validation classifies as graal-error rather than risking a silent bad cast.
 */

const PRIMITIVES = new Set([
  "int", "boolean", "char", "double", "long", "float", "short", "byte", "void",
]);

const STRING_LIKE = new Set(["String", "CharSequence", "java.lang.String"]);

const LIST_BASES = new Set(["ArrayList", "List", "java.util.ArrayList", "java.util.List"]);

export class CastingTable {
  constructor(private readonly userTypes: Set<string>) {}

  /** Whether a single source-type expression is safe to marshal. */
  supports(typeExpr: string): boolean {
    const expr = typeExpr.trim();
    if (expr.length === 0) return false;
    if (expr.endsWith("[]")) return this.supports(expr.slice(0, -2));
    const generic = expr.match(/^([A-Za-z_][\w.]*)<(.*)>$/);
    if (generic) {
      const base = generic[1];
      if (!LIST_BASES.has(base)) return false;
      return this.splitArgs(generic[2]).every((arg) => this.supports(arg));
    }
    if (PRIMITIVES.has(expr) || STRING_LIKE.has(expr)) return true;
    if (LIST_BASES.has(expr)) return false; // raw list: element type unknown
    const simple = expr.includes(".") ? expr.slice(expr.lastIndexOf(".") + 1) : expr;
    return this.userTypes.has(simple) || this.userTypes.has(expr);
  }

  /** First unsupported type among the parameter/return types, if any. */
  firstUnsupported(paramTypes: string[], returnType: string | null): string | null {
    for (const p of paramTypes) {
      if (!this.supports(p)) return p;
    }
    if (returnType && returnType !== "void" && !this.supports(returnType)) {
      return returnType;
    }
    return null;
  }

  private splitArgs(inner: string): string[] {
    const out: string[] = [];
    let depth = 0;
    let current = "";
    for (const ch of inner) {
      if (ch === "<") depth += 1;
      if (ch === ">") depth -= 1;
      if (ch === "," && depth === 0) {
        out.push(current);
        current = "";
      } else {
        current += ch;
      }
    }
    if (current.trim()) out.push(current);
    return out.map((s) => s.trim());
  }
}

/** Declared class names of a source tree (scanned straight from the files). */
export function scanUserTypes(javaSources: string[]): Set<string> {
  const found = new Set<string>();
  const pattern = /\b(?:class|interface)\s+([A-Za-z_]\w*)/g;
  for (const text of javaSources) {
    for (const match of text.matchAll(pattern)) {
      found.add(match[1]);
    }
  }
  return found;
}
