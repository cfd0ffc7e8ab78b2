"""Class index, static type inference and call-site resolution.

Shared by schema extraction (call-graph edges) and the transform stage
(rebinding call sites after renames). The inference is deliberately shallow:
declared types of locals/fields/params plus literal and return types. That is
enough to bind overloads statically; anything deeper is out of scope.

Dynamically dispatched calls over-approximate: the edge set includes every
override of the statically resolved method in subtypes of the receiver's
static type.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from fragport.errors import AmbiguousCallSite
from fragport.javamini import ast as J

PRIMITIVES = {"int", "boolean", "char", "double", "long", "float", "short", "byte"}
LIBRARY_SIMPLE = {"String", "StringBuilder", "Object", "ArrayList", "List", "Math", "Integer",
                  "HashMap", "Map"}
KNOWN_LIBRARY_QUALIFIED = {
    "String": "java.lang.String",
    "StringBuilder": "java.lang.StringBuilder",
    "Object": "java.lang.Object",
    "Integer": "java.lang.Integer",
    "Math": "java.lang.Math",
    "ArrayList": "java.util.ArrayList",
    "List": "java.util.List",
    "HashMap": "java.util.HashMap",
    "Map": "java.util.Map",
}
EXCEPTION_SIMPLE = {
    "Throwable", "Exception", "RuntimeException", "IllegalArgumentException",
    "IllegalStateException", "NullPointerException", "ArithmeticException",
    "IndexOutOfBoundsException", "UnsupportedOperationException", "AssertionError",
}

# return types of common library calls, keyed by (receiver type, method name)
LIBRARY_RETURNS = {
    ("String", "length"): "int", ("String", "charAt"): "char",
    ("String", "substring"): "String", ("String", "indexOf"): "int",
    ("String", "contains"): "boolean", ("String", "equals"): "boolean",
    ("String", "equalsIgnoreCase"): "boolean", ("String", "isEmpty"): "boolean",
    ("String", "startsWith"): "boolean", ("String", "endsWith"): "boolean",
    ("String", "toUpperCase"): "String", ("String", "toLowerCase"): "String",
    ("String", "trim"): "String", ("String", "replace"): "String",
    ("String", "concat"): "String", ("String", "compareTo"): "int",
    ("String", "toString"): "String", ("String", "hashCode"): "int",
    ("StringBuilder", "append"): "StringBuilder", ("StringBuilder", "toString"): "String",
    ("StringBuilder", "length"): "int",
    ("ArrayList", "add"): "boolean", ("ArrayList", "get"): "unknown",
    ("ArrayList", "size"): "int", ("ArrayList", "isEmpty"): "boolean",
    ("ArrayList", "contains"): "boolean", ("ArrayList", "remove"): "unknown",
    ("ArrayList", "set"): "unknown",
}
STATIC_LIBRARY_RETURNS = {
    ("Math", "max"): "int", ("Math", "min"): "int", ("Math", "abs"): "int",
    ("Integer", "parseInt"): "int", ("Integer", "toString"): "String",
    ("String", "valueOf"): "String",
}


@dataclass
class ClassEntry:
    qname: str
    decl: J.ClassDecl
    unit: J.CompilationUnit
    file_path: str
    enclosing: str | None
    origin: str                                  # app | test
    super_qname: str | None = None               # repo classes only
    interface_qnames: list[str] = field(default_factory=list)

    @property
    def simple_name(self) -> str:
        return self.qname.rsplit(".", 1)[-1]

    def field_type(self, name: str) -> J.TypeRef | None:
        for f in self.decl.fields:
            if f.name == name:
                return f.type
        return None

    def methods_named(self, name: str) -> list[J.MethodDecl]:
        return [m for m in self.decl.methods if m.name == name and not m.is_constructor]

    def constructors(self) -> list[J.MethodDecl]:
        return [m for m in self.decl.methods if m.is_constructor]


class ClassIndex:
    """All classes of a parsed repo plus name-resolution helpers."""

    def __init__(self, units: list[tuple[J.CompilationUnit, str, str]]):
        """units: (unit, repo-relative file path, origin app|test)"""
        self.entries: dict[str, ClassEntry] = {}
        self.simple: dict[str, list[str]] = {}
        for unit, file_path, origin in units:
            for decl in unit.classes:
                self._add(decl, unit.package or "", unit, file_path, None, origin)
        for entry in self.entries.values():
            if entry.decl.extends:
                sup = self.resolve_name(entry.decl.extends, entry)
                entry.super_qname = sup
            entry.interface_qnames = [
                q for q in (self.resolve_name(i, entry) for i in entry.decl.implements)
                if q is not None
            ]

    def _add(self, decl: J.ClassDecl, prefix: str, unit: J.CompilationUnit,
             file_path: str, enclosing: str | None, origin: str) -> None:
        qname = f"{prefix}.{decl.name}" if prefix else decl.name
        entry = ClassEntry(qname, decl, unit, file_path, enclosing, origin)
        self.entries[qname] = entry
        self.simple.setdefault(decl.name, []).append(qname)
        for inner in decl.inner_classes:
            self._add(inner, qname, unit, file_path, qname, origin)

    def resolve_name(self, name: str, context: ClassEntry | None) -> str | None:
        """Resolve a type name to a repo class qname; None when external."""
        if name in self.entries:
            return name
        if context is not None:
            unit = context.unit
            # inner class of the enclosing lexical chain
            scope: str | None = context.qname
            while scope is not None:
                qualified = f"{scope}.{name}"
                if qualified in self.entries:
                    return qualified
                scope = self.entries[scope].enclosing if scope in self.entries else None
            if unit.package:
                qualified = f"{unit.package}.{name}"
                if qualified in self.entries:
                    return qualified
            for imp in unit.imports:
                plain = imp.removeprefix("static ").strip()
                if plain.endswith("." + name) and plain in self.entries:
                    return plain
            # dotted inner reference, e.g. Lines.Buffer
            if "." in name:
                outer, _, tail = name.rpartition(".")
                outer_q = self.resolve_name(outer, context)
                if outer_q is not None and f"{outer_q}.{tail}" in self.entries:
                    return f"{outer_q}.{tail}"
        candidates = self.simple.get(name.rsplit(".", 1)[-1], [])
        if len(candidates) == 1:
            return candidates[0]
        return None

    def supertype_chain(self, qname: str) -> list[str]:
        out: list[str] = []
        stack = [qname]
        while stack:
            q = stack.pop()
            if q in out or q not in self.entries:
                continue
            out.append(q)
            entry = self.entries[q]
            if entry.super_qname:
                stack.append(entry.super_qname)
            stack.extend(entry.interface_qnames)
        return out

    def is_subtype(self, sub: str, sup: str) -> bool:
        return sup in self.supertype_chain(sub)

    def subtypes_of(self, qname: str) -> list[str]:
        return [q for q in self.entries if qname in self.supertype_chain(q)]

    def lookup_method(self, class_qname: str, name: str) -> list[tuple[str, J.MethodDecl]]:
        """Methods named `name` through the supertype chain, nearest first."""
        found: list[tuple[str, J.MethodDecl]] = []
        seen: set[str] = set()
        for q in self._linearized(class_qname):
            entry = self.entries.get(q)
            if entry is None:
                continue
            for m in entry.methods_named(name):
                if m.signature() not in seen:
                    seen.add(m.signature())
                    found.append((q, m))
        return found

    def _linearized(self, qname: str) -> list[str]:
        out: list[str] = []
        cur: str | None = qname
        while cur is not None and cur in self.entries:
            out.append(cur)
            for i in self.entries[cur].interface_qnames:
                if i not in out:
                    out.append(i)
            cur = self.entries[cur].super_qname
        return out

    def lookup_field(self, class_qname: str, name: str) -> J.TypeRef | None:
        for q in self._linearized(class_qname):
            entry = self.entries.get(q)
            if entry is not None:
                ftype = entry.field_type(name)
                if ftype is not None:
                    return ftype
        return None


@dataclass
class MethodContext:
    index: ClassIndex
    entry: ClassEntry
    method: J.MethodDecl | None
    locals: dict[str, str] = field(default_factory=dict)

    def child(self) -> "MethodContext":
        return MethodContext(self.index, self.entry, self.method, dict(self.locals))


def type_ref_to_type(type_ref: J.TypeRef, ctx: MethodContext) -> str:
    name = type_ref.name
    if name in PRIMITIVES:
        return name
    if name in ("String", "StringBuilder", "Object", "ArrayList", "List"):
        return "ArrayList" if name == "List" else name
    resolved = ctx.index.resolve_name(name, ctx.entry)
    if resolved is not None:
        return resolved
    return name  # external class kept by raw name


def infer_type(expr: J.Expr, ctx: MethodContext) -> str:
    if isinstance(expr, J.Literal):
        return {"int": "int", "double": "double", "string": "String",
                "char": "char", "boolean": "boolean", "null": "null"}[expr.kind]
    if isinstance(expr, J.Name):
        if expr.ident in ctx.locals:
            return ctx.locals[expr.ident]
        ftype = ctx.index.lookup_field(ctx.entry.qname, expr.ident)
        if ftype is not None:
            return type_ref_to_type(ftype, ctx)
        resolved = ctx.index.resolve_name(expr.ident, ctx.entry)
        if resolved is not None:
            return f"class:{resolved}"
        if expr.ident in LIBRARY_SIMPLE or expr.ident in EXCEPTION_SIMPLE:
            return f"class:{expr.ident}"
        return "unknown"
    if isinstance(expr, J.This):
        return ctx.entry.qname
    if isinstance(expr, J.FieldAccess):
        target = infer_type(expr.target, ctx)
        if target.startswith("class:"):
            owner = target.removeprefix("class:")
            if owner in ctx.index.entries:
                ftype = ctx.index.lookup_field(owner, expr.name)
                if ftype is not None:
                    return type_ref_to_type(ftype, ctx)
            return "unknown"
        if target in ctx.index.entries:
            ftype = ctx.index.lookup_field(target, expr.name)
            if ftype is not None:
                return type_ref_to_type(ftype, ctx)
        return "unknown"
    if isinstance(expr, J.Call):
        resolved = resolve_call(expr, ctx, strict=False)
        if resolved.kind == "methods" and resolved.targets:
            decl = resolved.targets[0][1]
            if decl.return_type is None:
                return "unknown"
            return type_ref_to_type(decl.return_type, ctx)
        return resolved.return_type or "unknown"
    if isinstance(expr, J.New):
        name = expr.type.name.rsplit(".", 1)[-1]
        if name in ("ArrayList", "StringBuilder"):
            return name
        resolved = ctx.index.resolve_name(expr.type.name, ctx.entry)
        return resolved if resolved is not None else expr.type.name
    if isinstance(expr, J.Binary):
        if expr.op in ("&&", "||", "==", "!=", "<", "<=", ">", ">="):
            return "boolean"
        left = infer_type(expr.left, ctx)
        right = infer_type(expr.right, ctx)
        if expr.op == "+" and ("String" in (left, right)):
            return "String"
        if "double" in (left, right):
            return "double"
        return "int"
    if isinstance(expr, J.Unary):
        return "boolean" if expr.op == "!" else infer_type(expr.operand, ctx)
    if isinstance(expr, J.Ternary):
        then = infer_type(expr.then, ctx)
        return then if then != "null" else infer_type(expr.other, ctx)
    if isinstance(expr, J.Assign):
        return infer_type(expr.value, ctx)
    if isinstance(expr, J.IncDec):
        return infer_type(expr.target, ctx)
    if isinstance(expr, J.InstanceOf):
        return "boolean"
    if isinstance(expr, J.Cast):
        return type_ref_to_type(expr.type, ctx)
    return "unknown"


@dataclass
class ResolvedCall:
    kind: str                                    # methods | constructor | external
    targets: list[tuple[str, J.MethodDecl]] = field(default_factory=list)
    api_name: str = ""
    return_type: str | None = None
    dispatch_root: tuple[str, J.MethodDecl] | None = None  # statically bound target


def _overload_score(param: J.TypeRef, arg_type: str, ctx: MethodContext) -> int:
    name = param.name
    if arg_type == "unknown":
        return 0
    if name == "int":
        return 2 if arg_type == "int" else -100
    if name == "double":
        return 2 if arg_type == "double" else (1 if arg_type == "int" else -100)
    if name == "boolean":
        return 2 if arg_type == "boolean" else -100
    if name == "char":
        return 2 if arg_type == "char" else -100
    if name == "String":
        return 2 if arg_type == "String" else (1 if arg_type == "null" else -100)
    if name == "Object":
        return 1
    if name in ("ArrayList", "List"):
        return 2 if arg_type == "ArrayList" else (1 if arg_type == "null" else -100)
    target = ctx.index.resolve_name(name, ctx.entry)
    if target is not None:
        if arg_type == "null":
            return 1
        if arg_type == target:
            return 2
        if arg_type in ctx.index.entries and ctx.index.is_subtype(arg_type, target):
            return 1
        return -100
    return 0 if arg_type in ("null",) else -100


def pick_overload_static(candidates: list[tuple[str, J.MethodDecl]], arg_types: list[str],
                         ctx: MethodContext, what: str, strict: bool) -> list[tuple[str, J.MethodDecl]]:
    by_arity = [(q, m) for q, m in candidates if len(m.params) == len(arg_types)]
    if not by_arity:
        return []
    if len(by_arity) == 1:
        return by_arity
    scored = []
    for q, m in by_arity:
        total = 0
        ok = True
        for p, a in zip(m.params, arg_types):
            s = _overload_score(p.type, a, ctx)
            if s <= -100:
                ok = False
                break
            total += s
        if ok:
            scored.append((total, q, m))
    if not scored:
        return []
    scored.sort(key=lambda t: -t[0])
    best = [(q, m) for total, q, m in scored if total == scored[0][0]]
    if len(best) > 1 and strict:
        raise AmbiguousCallSite(f"cannot statically bind {what} among "
                                + ", ".join(m.signature() for _, m in best))
    return best


def resolve_call(call: J.Call, ctx: MethodContext, strict: bool = False,
                 expand_overrides: bool = False) -> ResolvedCall:
    arg_types = [infer_type(a, ctx) for a in call.args]

    def finish(owner_qname: str, picked: list[tuple[str, J.MethodDecl]]) -> ResolvedCall:
        root = picked[0] if picked else None
        targets = list(picked)
        if expand_overrides and root is not None:
            for sub in ctx.index.subtypes_of(owner_qname):
                entry = ctx.index.entries[sub]
                for m in entry.methods_named(root[1].name):
                    if m.signature() == root[1].signature() and (sub, m) not in targets:
                        targets.append((sub, m))
        return ResolvedCall("methods", targets, dispatch_root=root)

    if call.target is None:
        # static import of the assert shim -> external
        if any(i.startswith("static org.junit") for i in ctx.entry.unit.imports):
            if call.name in ("assertEquals", "assertTrue", "assertFalse", "assertNull",
                             "assertNotNull", "assertSame", "fail"):
                return ResolvedCall("external", api_name=f"org.junit.Assert.{call.name}")
        candidates = ctx.index.lookup_method(ctx.entry.qname, call.name)
        picked = pick_overload_static(candidates, arg_types, ctx,
                                      f"{ctx.entry.simple_name}.{call.name}", strict)
        if picked:
            return finish(ctx.entry.qname, picked)
        return ResolvedCall("external", api_name=call.name)

    # ClassName.static(...)
    target_type = infer_type(call.target, ctx)
    if target_type.startswith("class:"):
        owner = target_type.removeprefix("class:")
        if owner in ctx.index.entries:
            candidates = [(q, m) for q, m in ctx.index.lookup_method(owner, call.name) if m.is_static]
            picked = pick_overload_static(candidates, arg_types, ctx,
                                          f"{owner}.{call.name}", strict)
            if picked:
                return ResolvedCall("methods", picked, dispatch_root=picked[0])
        simple = owner.rsplit(".", 1)[-1]
        rt = STATIC_LIBRARY_RETURNS.get((simple, call.name))
        return ResolvedCall("external", api_name=f"{KNOWN_LIBRARY_QUALIFIED.get(simple, owner)}.{call.name}",
                            return_type=rt)

    if target_type in ctx.index.entries:
        candidates = ctx.index.lookup_method(target_type, call.name)
        picked = pick_overload_static(candidates, arg_types, ctx,
                                      f"{target_type}.{call.name}", strict)
        if picked:
            return finish(target_type, picked)
        return ResolvedCall("external", api_name=f"{target_type}.{call.name}")

    rt = LIBRARY_RETURNS.get((target_type, call.name))
    qualified = KNOWN_LIBRARY_QUALIFIED.get(target_type, target_type)
    return ResolvedCall("external", api_name=f"{qualified}.{call.name}", return_type=rt)


def resolve_new(new: J.New, ctx: MethodContext, strict: bool = False) -> ResolvedCall:
    simple = new.type.name.rsplit(".", 1)[-1]
    if simple in ("ArrayList", "StringBuilder", "HashMap") or simple in EXCEPTION_SIMPLE:
        return ResolvedCall("external",
                            api_name=KNOWN_LIBRARY_QUALIFIED.get(simple, f"java.lang.{simple}"))
    resolved = ctx.index.resolve_name(new.type.name, ctx.entry)
    if resolved is None:
        return ResolvedCall("external", api_name=new.type.name)
    arg_types = [infer_type(a, ctx) for a in new.args]
    entry = ctx.index.entries[resolved]
    candidates = [(resolved, m) for m in entry.constructors()]
    picked = pick_overload_static(candidates, arg_types, ctx, f"new {simple}", strict)
    if not picked and not entry.constructors():
        return ResolvedCall("constructor", [], dispatch_root=None)  # implicit default ctor
    return ResolvedCall("constructor", picked, dispatch_root=picked[0] if picked else None)
