"""Repository parsing: classes, fragments and the call graph.

One Fragment per field, application method and test method. Call edges come
from statically resolved call sites; unresolved calls collapse into the
external sentinel while the raw API name is kept on the fragment for prompt
context.
"""

from __future__ import annotations

from fragport.errors import ParseError
from fragport.javamini import ast as J
from fragport.javamini.runner import load_build_descriptor, source_files
from fragport.javamini.parser import parse_file
from fragport.sourcemodel.model import (
    EXTERNAL, CallGraph, ClassRecord, Fragment, Schema, SourceRepo, fragment_id,
)
from fragport.sourcemodel.typeindex import (
    ClassIndex, MethodContext, ResolvedCall, infer_type, resolve_call, resolve_new,
    type_ref_to_type,
)


def parse_repository(repo: SourceRepo) -> Schema:
    descriptor = load_build_descriptor(repo.root_path)
    app_files, test_files = source_files(repo.root_path, descriptor)
    if not app_files and not test_files:
        raise ParseError("repository contains no parseable source files",
                         file=str(repo.root_path))
    units: list[tuple[J.CompilationUnit, str, str]] = []
    for path in app_files:
        rel = str(path.relative_to(repo.root_path))
        units.append((parse_file(path, rel), rel, "app"))
    for path in test_files:
        rel = str(path.relative_to(repo.root_path))
        units.append((parse_file(path, rel), rel, "test"))

    index = ClassIndex(units)
    classes = _class_records(index)
    fragments, frag_of_member = _build_fragments(index)
    _resolve_edges(index, fragments, frag_of_member)
    graph = CallGraph(edges={(caller.id, callee)
                             for caller in fragments for callee in caller.callees})
    for caller_id, callee_id in graph.edges:
        if callee_id != EXTERNAL:
            next(f for f in fragments if f.id == callee_id).callers.add(caller_id)
    return Schema(classes=classes, fragments=fragments, call_graph=graph)


def _class_records(index: ClassIndex) -> list[ClassRecord]:
    records = []
    for qname in sorted(index.entries):
        entry = index.entries[qname]
        if entry.enclosing is not None:
            kind = "inner"
        elif entry.decl.kind == "interface":
            kind = "interface"
        elif "abstract" in entry.decl.modifiers:
            kind = "abstract"
        else:
            kind = "concrete"
        supertypes = []
        if entry.decl.extends:
            supertypes.append(index.resolve_name(entry.decl.extends, entry) or entry.decl.extends)
        for iface in entry.decl.implements:
            supertypes.append(index.resolve_name(iface, entry) or iface)
        records.append(ClassRecord(
            qualified_name=qname,
            file_path=entry.file_path,
            kind=kind,
            supertypes=supertypes,
            imports=list(entry.unit.imports),
            enclosing_class=entry.enclosing,
            origin=entry.origin,
        ))
    return records


def _line_slice(source: str, start_line: int, end_line: int) -> str:
    lines = source.splitlines()
    return "\n".join(lines[start_line - 1:end_line])


def _build_fragments(index: ClassIndex) -> tuple[list[Fragment], dict[tuple[str, int], Fragment]]:
    fragments: list[Fragment] = []
    frag_of_member: dict[tuple[str, int], Fragment] = {}
    for qname in sorted(index.entries):
        entry = index.entries[qname]
        method_kind = "test_method" if entry.origin == "test" else "application_method"
        for f in entry.decl.fields:
            code = _line_slice(entry.unit.source, f.span.start_line, f.span.end_line)
            frag = Fragment(
                id=fragment_id(f"{qname}#{f.name}", code),
                kind="field",
                class_qname=qname,
                name=f.name,
                signature=f.name,
                file_path=entry.file_path,
                location=(f.span.start_line, f.span.end_line),
                code=code,
                param_types=[],
                return_type=f.type.render(),
                annotations=list(f.annotations),
                modifiers=list(f.modifiers),
            )
            fragments.append(frag)
            frag_of_member[(qname, id(f))] = frag
        for m in entry.decl.methods:
            code = _line_slice(entry.unit.source, m.span.start_line, m.span.end_line)
            frag = Fragment(
                id=fragment_id(f"{qname}#{m.signature()}", code),
                kind=method_kind,
                class_qname=qname,
                name=m.name,
                signature=m.signature(),
                file_path=entry.file_path,
                location=(m.span.start_line, m.span.end_line),
                code=code,
                param_types=[p.type.render() for p in m.params],
                return_type=m.return_type.render() if m.return_type else None,
                annotations=list(m.annotations),
                modifiers=list(m.modifiers),
                is_constructor=m.is_constructor,
                is_abstract=m.body is None,
            )
            fragments.append(frag)
            frag_of_member[(qname, id(m))] = frag
    return fragments, frag_of_member


def iter_call_sites(decl: J.MethodDecl, ctx: MethodContext, callback) -> None:
    """Walks a method body in evaluation order, tracking local declarations.

    callback(node) fires for every Call, New, ThisCall and SuperCall node with
    `ctx.locals` reflecting the bindings visible at that point.
    """
    if decl is not None:
        for p in decl.params:
            ctx.locals[p.name] = type_ref_to_type(p.type, ctx)
    if decl is not None and decl.body is not None:
        _walk_block(decl.body, ctx, callback)


def _walk_block(block: J.Block, ctx: MethodContext, callback) -> None:
    scope = ctx.child()
    for stmt in block.statements:
        _walk_stmt(stmt, scope, callback)


def _walk_stmt(stmt: J.Stmt, ctx: MethodContext, callback) -> None:
    if isinstance(stmt, J.Block):
        _walk_block(stmt, ctx, callback)
    elif isinstance(stmt, J.LocalVar):
        if stmt.init is not None:
            _walk_expr(stmt.init, ctx, callback)
        ctx.locals[stmt.name] = type_ref_to_type(stmt.type, ctx)
    elif isinstance(stmt, J.ExprStmt):
        _walk_expr(stmt.expr, ctx, callback)
    elif isinstance(stmt, J.If):
        _walk_expr(stmt.cond, ctx, callback)
        _walk_stmt(stmt.then, ctx.child(), callback)
        if stmt.other is not None:
            _walk_stmt(stmt.other, ctx.child(), callback)
    elif isinstance(stmt, J.While):
        _walk_expr(stmt.cond, ctx, callback)
        _walk_stmt(stmt.body, ctx.child(), callback)
    elif isinstance(stmt, J.For):
        scope = ctx.child()
        if stmt.init is not None:
            _walk_stmt(stmt.init, scope, callback)
        if stmt.cond is not None:
            _walk_expr(stmt.cond, scope, callback)
        if stmt.update is not None:
            _walk_expr(stmt.update, scope, callback)
        _walk_stmt(stmt.body, scope.child(), callback)
    elif isinstance(stmt, J.Return):
        if stmt.value is not None:
            _walk_expr(stmt.value, ctx, callback)
    elif isinstance(stmt, J.Throw):
        _walk_expr(stmt.value, ctx, callback)
    elif isinstance(stmt, J.Try):
        _walk_block(stmt.body, ctx, callback)
        for catch in stmt.catches:
            scope = ctx.child()
            scope.locals[catch.name] = type_ref_to_type(catch.type, scope)
            _walk_block(catch.body, scope, callback)
    # Break/Continue carry no expressions


def _walk_expr(expr: J.Expr, ctx: MethodContext, callback) -> None:
    if isinstance(expr, (J.Literal, J.Name, J.This)):
        return
    if isinstance(expr, J.FieldAccess):
        _walk_expr(expr.target, ctx, callback)
    elif isinstance(expr, J.Call):
        if expr.target is not None:
            _walk_expr(expr.target, ctx, callback)
        for a in expr.args:
            _walk_expr(a, ctx, callback)
        callback(expr, ctx)
    elif isinstance(expr, (J.New, J.ThisCall, J.SuperCall)):
        for a in expr.args:
            _walk_expr(a, ctx, callback)
        callback(expr, ctx)
    elif isinstance(expr, J.Unary):
        _walk_expr(expr.operand, ctx, callback)
    elif isinstance(expr, J.Binary):
        _walk_expr(expr.left, ctx, callback)
        _walk_expr(expr.right, ctx, callback)
    elif isinstance(expr, J.Assign):
        _walk_expr(expr.value, ctx, callback)
        _walk_expr(expr.target, ctx, callback)
    elif isinstance(expr, J.Ternary):
        _walk_expr(expr.cond, ctx, callback)
        _walk_expr(expr.then, ctx, callback)
        _walk_expr(expr.other, ctx, callback)
    elif isinstance(expr, J.IncDec):
        _walk_expr(expr.target, ctx, callback)
    elif isinstance(expr, (J.InstanceOf, J.Cast)):
        _walk_expr(expr.operand, ctx, callback)


def _resolve_edges(index: ClassIndex, fragments: list[Fragment],
                   frag_of_member: dict[tuple[str, int], Fragment]) -> None:
    decl_to_fragment: dict[tuple[str, str], Fragment] = {
        (f.class_qname, f.signature): f for f in fragments
    }

    def record(frag: Fragment, resolved: ResolvedCall) -> None:
        if resolved.kind == "external" or not resolved.targets:
            frag.callees.add(EXTERNAL)
            if resolved.api_name and resolved.api_name not in frag.external_apis:
                frag.external_apis.append(resolved.api_name)
            return
        for owner_qname, decl in resolved.targets:
            target = decl_to_fragment.get((owner_qname, decl.signature()))
            if target is not None:
                frag.callees.add(target.id)
            else:
                frag.callees.add(EXTERNAL)

    for qname in sorted(index.entries):
        entry = index.entries[qname]

        def visit(owner_frag: Fragment):
            def on_site(node, ctx: MethodContext) -> None:
                if isinstance(node, J.Call):
                    record(owner_frag, resolve_call(node, ctx, expand_overrides=True))
                elif isinstance(node, J.New):
                    record(owner_frag, resolve_new(node, ctx))
                elif isinstance(node, J.ThisCall):
                    arg_types = [infer_type(a, ctx) for a in node.args]
                    from fragport.sourcemodel.typeindex import pick_overload_static
                    candidates = [(qname, c) for c in entry.constructors()]
                    picked = pick_overload_static(candidates, arg_types, ctx, "this()", strict=False)
                    record(owner_frag, ResolvedCall("constructor", picked))
                elif isinstance(node, J.SuperCall):
                    sup = entry.super_qname
                    if sup is not None and sup in index.entries:
                        arg_types = [infer_type(a, ctx) for a in node.args]
                        from fragport.sourcemodel.typeindex import pick_overload_static
                        candidates = [(sup, c) for c in index.entries[sup].constructors()]
                        picked = pick_overload_static(candidates, arg_types, ctx, "super()", strict=False)
                        record(owner_frag, ResolvedCall("constructor", picked))
                    else:
                        record(owner_frag, ResolvedCall("external", api_name="super"))

            return on_site

        for f in entry.decl.fields:
            frag = frag_of_member[(qname, id(f))]
            if f.init is not None:
                ctx = MethodContext(index, entry, None)
                _walk_expr(f.init, ctx, visit(frag))
        for m in entry.decl.methods:
            frag = frag_of_member[(qname, id(m))]
            ctx = MethodContext(index, entry, m)
            iter_call_sites(m, ctx, visit(frag))


def build_index(repo: SourceRepo) -> ClassIndex:
    """Parse the repo into a ClassIndex without building a schema (transform helper)."""
    descriptor = load_build_descriptor(repo.root_path)
    app_files, test_files = source_files(repo.root_path, descriptor)
    units: list[tuple[J.CompilationUnit, str, str]] = []
    for path in app_files:
        rel = str(path.relative_to(repo.root_path))
        units.append((parse_file(path, rel), rel, "app"))
    for path in test_files:
        rel = str(path.relative_to(repo.root_path))
        units.append((parse_file(path, rel), rel, "test"))
    return ClassIndex(units)
