import { describe, expect, it } from "vitest";

import { CastingTable, scanUserTypes } from "../src/casting.js";

const table = new CastingTable(new Set(["Flag", "Option", "Registry"]));

describe("CastingTable", () => {
  it("accepts primitives and strings", () => {
    for (const t of ["int", "boolean", "char", "double", "String", "void"]) {
      expect(table.supports(t)).toBe(true);
    }
  });

  it("accepts declared user types", () => {
    expect(table.supports("Flag")).toBe(true);
    expect(table.supports("minilib.core.Option")).toBe(true);
  });

  it("accepts homogeneous lists of supported element types", () => {
    expect(table.supports("ArrayList<String>")).toBe(true);
    expect(table.supports("List<Flag>")).toBe(true);
    expect(table.supports("ArrayList<ArrayList<int>>")).toBe(true);
  });

  it("rejects Object, raw lists, maps and unknown types", () => {
    expect(table.supports("Object")).toBe(false);
    expect(table.supports("ArrayList")).toBe(false);
    expect(table.supports("Map<String, Flag>")).toBe(false);
    expect(table.supports("java.util.Map<String, String>")).toBe(false);
    expect(table.supports("ArrayList<Object>")).toBe(false);
    expect(table.supports("Widget")).toBe(false);
  });

  it("reports the first unsupported boundary type", () => {
    expect(table.firstUnsupported(["int", "Object", "String"], "int")).toBe("Object");
    expect(table.firstUnsupported(["int"], "Map<String, int>")).toBe("Map<String, int>");
    expect(table.firstUnsupported(["String"], "void")).toBeNull();
  });
});

describe("scanUserTypes", () => {
  it("finds classes and interfaces", () => {
    const found = scanUserTypes([
      "package a;\npublic class Flag { }",
      "public interface Check { boolean accept(String v); }\nclass Inner { }",
    ]);
    expect(found).toEqual(new Set(["Flag", "Check", "Inner"]));
  });
});
