"""Rewrite planning and application for the overload-removal transform.

Edits are exact character-offset splices against the original sources; a plan
is applied by copying the repo to an output directory and rewriting the
touched files. Every rewrite keeps the repo parseable; behavior preservation
is checked afterwards by rerunning the source suite.
"""

from __future__ import annotations

import shutil
from dataclasses import dataclass, field
from pathlib import Path

from fragport.errors import AmbiguousCallSite, UnsupportedChain
from fragport.javamini import ast as J
from fragport.sourcemodel.extract import iter_call_sites
from fragport.sourcemodel.typeindex import (
    ClassIndex, MethodContext, infer_type, pick_overload_static, resolve_call, resolve_new,
)
from fragport.transform.overloads import OverloadGroup, delegation_head, find_overload_groups

TYPE_DEFAULTS = {"int": "0", "double": "0.0", "boolean": "false", "char": "'\\0'"}


@dataclass
class Edit:
    file: str
    start_offset: int
    end_offset: int
    replacement: str
    line_range: tuple[int, int]

    def overlaps(self, other: "Edit") -> bool:
        if self.file != other.file:
            return False
        a0, a1, b0, b1 = self.start_offset, self.end_offset, other.start_offset, other.end_offset
        if a0 == a1 or b0 == b1:  # insertions only collide when inside the other's replaced span
            return b0 < a0 < b1 if a0 == a1 else a0 < b0 < a1
        return a0 < b1 and b0 < a1


@dataclass
class RewritePlan:
    edits: list[Edit] = field(default_factory=list)
    new_signatures: dict[str, str] = field(default_factory=dict)   # old qsig -> new qsig
    id_parameter_values: dict[str, int] = field(default_factory=dict)

    def add(self, edit: Edit) -> None:
        for other in self.edits:
            if edit.overlaps(other):
                raise AmbiguousCallSite(
                    f"conflicting edits in {edit.file} at {edit.start_offset}..{edit.end_offset}")
        self.edits.append(edit)


def _default_for(type_ref: J.TypeRef) -> str:
    return TYPE_DEFAULTS.get(type_ref.name, "null")


def _slice(source: str, span: J.Span) -> str:
    return source[span.start_offset:span.end_offset]


def _line_indent(source: str, offset: int) -> str:
    bol = source.rfind("\n", 0, offset) + 1
    indent = ""
    for ch in source[bol:offset]:
        if ch in " \t":
            indent += ch
        else:
            break
    return indent


def _decl_removal_bounds(source: str, span: J.Span) -> tuple[int, int]:
    """Expand a declaration span to whole lines, swallowing one blank line."""
    start = source.rfind("\n", 0, span.start_offset) + 1
    end = span.end_offset
    if end < len(source) and source[end] == "\n":
        end += 1
        nxt = source.find("\n", end)
        if nxt != -1 and source[end:nxt].strip() == "":
            end = nxt + 1
    return start, end


def _reindent(text: str, target: str) -> str:
    import textwrap
    body = textwrap.dedent(text)
    return "\n".join(target + line if line.strip() else "" for line in body.splitlines())


def _body_inner(source: str, body: J.Block) -> str:
    return source[body.span.start_offset + 1:body.span.end_offset - 1]


def _access_mods(decl: J.MethodDecl) -> str:
    access = [m for m in decl.modifiers if m in ("public", "protected", "private")]
    return (access[0] + " ") if access else ""


@dataclass
class CtorRewrite:
    """Computed shape of one class's constructor resolution."""
    group: OverloadGroup
    pattern: str
    targets: list[int]                   # indices of non-delegating ctors
    delegators: dict[int, int]           # delegator index -> target index
    merged_slots: list[tuple[str, str]] = field(default_factory=list)   # (type text, name)
    slot_map: dict[int, list[int]] = field(default_factory=dict)        # ctor index -> slot per param
    uses_id: bool = False
    factory_name: dict[int, str] = field(default_factory=dict)

    @property
    def class_simple(self) -> str:
        return self.group.owner_class.rsplit(".", 1)[-1]


def _plan_ctor_shapes(index: ClassIndex, groups: list[OverloadGroup]) -> list[CtorRewrite]:
    shapes = []
    for group in groups:
        entry = index.entries[group.owner_class]
        delegators: dict[int, int] = {}
        targets: list[int] = []
        for i, ctor in enumerate(group.members):
            head = delegation_head(ctor)
            if head is None:
                targets.append(i)
                continue
            ctx = _ctx_with_params(index, entry, ctor)
            arg_types = [infer_type(a, ctx) for a in head.args]
            picked = pick_overload_static([(group.owner_class, c) for c in group.members],
                                          arg_types, ctx, f"this() in {group.owner_class}", strict=True)
            if not picked:
                raise UnsupportedChain(f"unresolvable this() delegation in {group.owner_class}")
            target_decl = picked[0][1]
            tidx = group.members.index(target_decl)
            if tidx == i:
                raise UnsupportedChain(f"self-delegating constructor in {group.owner_class}")
            delegators[i] = tidx
        for i, t in delegators.items():
            if t in delegators:
                raise UnsupportedChain(
                    f"constructor delegation chain in {group.owner_class}; only one hop is supported")
        shape = CtorRewrite(group, group.pattern, targets, delegators)
        shape.uses_id = group.pattern == "independent" or (
            group.pattern == "hybrid")
        if group.pattern == "independent" or len(targets) > 1:
            shape.merged_slots, shape.slot_map = _merge_params(group)
        for i in delegators:
            shape.factory_name[i] = f"{shape.class_simple}{i}"
        existing = {m.name for m in entry.decl.methods}
        for name in shape.factory_name.values():
            if name in existing:
                raise UnsupportedChain(
                    f"factory name {name} collides with an existing member of {group.owner_class}")
        return_names = [p.name for t in targets for p in group.members[t].params]
        if shape.uses_id and "id" in return_names:
            raise UnsupportedChain(f"constructor of {group.owner_class} already has a parameter "
                                   "named 'id'; cannot add the discriminator")
        shapes.append(shape)
    return shapes


def _ctx_with_params(index: ClassIndex, entry, decl: J.MethodDecl) -> MethodContext:
    from fragport.sourcemodel.typeindex import type_ref_to_type
    ctx = MethodContext(index, entry, decl)
    for p in decl.params:
        ctx.locals[p.name] = type_ref_to_type(p.type, ctx)
    return ctx


def _merge_params(group: OverloadGroup) -> tuple[list[tuple[str, str]], dict[int, list[int]]]:
    slots: list[tuple[str, str]] = []
    slot_map: dict[int, list[int]] = {}
    for i, ctor in enumerate(group.members):
        if delegation_head(ctor) is not None:
            continue
        indices = []
        for p in ctor.params:
            rendered = p.type.render()
            found = None
            for s, (stype, sname) in enumerate(slots):
                if sname == p.name:
                    if stype != rendered:
                        raise UnsupportedChain(
                            f"parameter {p.name} of {group.owner_class} constructors has "
                            "conflicting types across overloads")
                    found = s
                    break
            if found is None:
                slots.append((rendered, p.name))
                found = len(slots) - 1
            indices.append(found)
        slot_map[i] = indices
    return slots, slot_map


def plan_transform(index: ClassIndex) -> RewritePlan:
    """One combined plan: method renames, constructor resolution, call-site rebinds."""
    plan = RewritePlan()
    method_groups, ctor_groups = find_overload_groups(index)

    # method declaration renames
    renamed: dict[tuple[str, str], str] = {}   # (class qname, signature) -> new name
    for group in method_groups:
        for k, decl in enumerate(group.members):
            new_name = f"{group.name}{k}"
            renamed[(group.owner_class, decl.signature())] = new_name
            entry = index.entries[group.owner_class]
            plan.add(Edit(entry.file_path, decl.name_span.start_offset, decl.name_span.end_offset,
                          new_name, (decl.name_span.start_line, decl.name_span.end_line)))
            old_sig = decl.signature()
            new_sig = f"{new_name}({','.join(p.type.render() for p in decl.params)})"
            plan.new_signatures[f"{group.owner_class}#{old_sig}"] = f"{group.owner_class}#{new_sig}"

    shapes = _plan_ctor_shapes(index, ctor_groups)
    by_class = {s.group.owner_class: s for s in shapes}
    for shape in shapes:
        _emit_ctor_decl_edits(index, shape, plan)

    # call sites across the whole repo (methods and field initializers)
    for qname in sorted(index.entries):
        entry = index.entries[qname]
        source = entry.unit.source

        def on_site(node, ctx: MethodContext) -> None:
            if isinstance(node, J.Call):
                resolved = resolve_call(node, ctx, strict=True)
                root = resolved.dispatch_root
                if root is not None and (root[0], root[1].signature()) in renamed:
                    new_name = renamed[(root[0], root[1].signature())]
                    plan.add(Edit(entry.file_path, node.name_span.start_offset,
                                  node.name_span.end_offset, new_name,
                                  (node.name_span.start_line, node.name_span.end_line)))
            elif isinstance(node, J.New):
                resolved = resolve_new(node, ctx, strict=True)
                root = resolved.dispatch_root
                if root is None or root[0] not in by_class:
                    return
                shape = by_class[root[0]]
                idx = shape.group.members.index(root[1])
                _emit_new_site_edit(entry.file_path, source, node, shape, idx, plan)

        for m in entry.decl.methods:
            if delegation_head(m) is not None and qname in by_class \
                    and m in by_class[qname].group.members:
                continue  # whole declaration is replaced by a factory
            iter_call_sites(m, _ctx_with_params(index, entry, m), on_site)
        for f in entry.decl.fields:
            if f.init is not None:
                from fragport.sourcemodel.extract import _walk_expr
                _walk_expr(f.init, MethodContext(index, entry, None), on_site)
    return plan


def _emit_ctor_decl_edits(index: ClassIndex, shape: CtorRewrite, plan: RewritePlan) -> None:
    group = shape.group
    entry = index.entries[group.owner_class]
    source = entry.unit.source
    cname = shape.class_simple

    if shape.pattern == "independent":
        first = group.members[0]
        base = _line_indent(source, first.span.start_offset)
        inner = base + "    "
        params_text = ", ".join(f"{t} {n}" for t, n in shape.merged_slots)
        lines = [f"{_access_mods(first)}{cname}(int id{', ' if params_text else ''}{params_text}) {{"]
        for k, ctor in enumerate(group.members):
            keyword = "if" if k == 0 else "} else if"
            lines.append(f"{inner}{keyword} (id == {k}) {{")
            body = _reindent(_body_inner(source, ctor.body).strip("\n"), inner + "    ")
            if body.strip():
                lines.append(body)
        lines.append(f"{inner}}}")
        lines.append(f"{base}}}")
        merged_text = "\n".join(lines)
        plan.add(Edit(entry.file_path, first.span.start_offset, first.span.end_offset,
                      merged_text, (first.span.start_line, first.span.end_line)))
        for ctor in group.members[1:]:
            s, e = _decl_removal_bounds(source, ctor.span)
            plan.add(Edit(entry.file_path, s, e, "", (ctor.span.start_line, ctor.span.end_line)))
        merged_sig = f"{cname}(int{',' if shape.merged_slots else ''}" \
                     f"{','.join(t for t, _ in shape.merged_slots)})"
        for k, ctor in enumerate(group.members):
            old = f"{group.owner_class}#{ctor.signature()}"
            plan.new_signatures[old] = f"{group.owner_class}#{merged_sig}"
            plan.id_parameter_values[old] = k
        return

    # chain / hybrid: one or more delegation targets stay constructors
    hybrid_ids = shape.pattern == "hybrid"
    multi_target = len(shape.targets) > 1
    if multi_target:
        raise UnsupportedChain(
            f"{group.owner_class}: delegation combined with multiple independent "
            "constructors is not supported")
    target_idx = shape.targets[0]
    target = group.members[target_idx]
    base = _line_indent(source, target.span.start_offset)
    inner = base + "    "

    if hybrid_ids:
        # insert the discriminator as first parameter
        paren = source.find("(", target.name_span.end_offset)
        sep = ", " if target.params else ""
        plan.add(Edit(entry.file_path, paren + 1, paren + 1, f"int id{sep}",
                      (target.span.start_line, target.span.start_line)))
        # guarded extra statements per hybrid delegator, before the closing brace
        close = target.body.span.end_offset - 1
        guard_text = ""
        for i in sorted(shape.delegators):
            ctor = group.members[i]
            extras = ctor.body.statements[1:]
            if not extras:
                continue
            chunk = source[_stmt_line_start(source, extras[0]):extras[-1].span.end_offset]
            guard_text += (f"    if (id == {i}) {{\n"
                           + _reindent(chunk, inner + "    ")
                           + f"\n{inner}}}\n{base}")
        if guard_text:
            plan.add(Edit(entry.file_path, close, close, guard_text,
                          (target.span.end_line, target.span.end_line)))
        old = f"{group.owner_class}#{target.signature()}"
        new_sig = f"{cname}(int{',' if target.params else ''}" \
                  f"{','.join(p.type.render() for p in target.params)})"
        plan.new_signatures[old] = f"{group.owner_class}#{new_sig}"
        plan.id_parameter_values[old] = target_idx

    for i in sorted(shape.delegators):
        ctor = group.members[i]
        head = delegation_head(ctor)
        args = [_slice(source, a.span) for a in head.args]
        if hybrid_ids:
            args = [str(i)] + args
        params_text = ", ".join(f"{p.type.render()} {p.name}" for p in ctor.params)
        factory = (f"{_access_mods(ctor)}static {cname} {shape.factory_name[i]}({params_text}) {{\n"
                   f"{inner}return new {cname}({', '.join(args)});\n"
                   f"{base}}}")
        plan.add(Edit(entry.file_path, ctor.span.start_offset, ctor.span.end_offset,
                      factory, (ctor.span.start_line, ctor.span.end_line)))
        old = f"{group.owner_class}#{ctor.signature()}"
        new_sig = f"{shape.factory_name[i]}({','.join(p.type.render() for p in ctor.params)})"
        plan.new_signatures[old] = f"{group.owner_class}#{new_sig}"


def _stmt_line_start(source: str, stmt: J.Stmt) -> int:
    return source.rfind("\n", 0, stmt.span.start_offset) + 1


def _emit_new_site_edit(file_path: str, source: str, node: J.New, shape: CtorRewrite,
                        idx: int, plan: RewritePlan) -> None:
    cname_written = _slice(source, node.name_span)
    if idx in shape.delegators:
        # new C(args) -> C.Ck(args)
        plan.add(Edit(file_path, node.span.start_offset, node.name_span.end_offset,
                      f"{cname_written}.{shape.factory_name[idx]}",
                      (node.span.start_line, node.span.start_line)))
        return
    if shape.pattern == "independent":
        paren = source.find("(", node.name_span.end_offset)
        arg_texts = [_slice(source, a.span) for a in node.args]
        slots = [None] * len(shape.merged_slots)
        for slot, text in zip(shape.slot_map[idx], arg_texts):
            slots[slot] = text
        filled = [text if text is not None else TYPE_DEFAULTS.get(stype, "null")
                  for (stype, _), text in zip(shape.merged_slots, slots)]
        new_args = ", ".join([str(idx)] + filled)
        plan.add(Edit(file_path, paren + 1, node.span.end_offset - 1, new_args,
                      (node.span.start_line, node.span.end_line)))
    elif shape.pattern == "hybrid" and idx in shape.targets:
        paren = source.find("(", node.name_span.end_offset)
        sep = ", " if node.args else ""
        plan.add(Edit(file_path, paren + 1, paren + 1, f"{idx}{sep}",
                      (node.span.start_line, node.span.start_line)))
    # pure chain targets keep their call form


def apply_plan(repo_root: Path, out_root: Path, plan: RewritePlan,
               index: ClassIndex) -> None:
    """Copies the repo and splices the edits. out_root must not exist."""
    repo_root = Path(repo_root)
    out_root = Path(out_root)
    if out_root.exists():
        shutil.rmtree(out_root)
    shutil.copytree(repo_root, out_root)
    by_file: dict[str, list[Edit]] = {}
    for edit in plan.edits:
        by_file.setdefault(edit.file, []).append(edit)
    sources = {entry.file_path: entry.unit.source for entry in index.entries.values()}
    for file_path, edits in by_file.items():
        text = sources[file_path]
        for edit in sorted(edits, key=lambda e: -e.start_offset):
            text = text[:edit.start_offset] + edit.replacement + text[edit.end_offset:]
        (out_root / file_path).write_text(text, encoding="utf-8")
