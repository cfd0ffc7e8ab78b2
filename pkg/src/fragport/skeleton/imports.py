"""Module-level import-cycle resolution via local imports.

Cycles are detected on the planned import graph. In each cycle the
lexicographically later module loses its module-level import of the earlier
cycle partner: the import moves into the using methods as a local import, and
any annotations naming the demoted classes become string literals.
"""

from __future__ import annotations

import re

from fragport.skeleton.build import ModulePlan, SkeletonProject


def _import_cycles(modules: dict[str, ModulePlan]) -> list[list[str]]:
    """Strongly connected components with more than one node (Tarjan)."""
    graph = {m: sorted(t for t in plan.imports if t in modules)
             for m, plan in modules.items()}
    index_counter = [0]
    stack: list[str] = []
    lowlink: dict[str, int] = {}
    index: dict[str, int] = {}
    on_stack: set[str] = set()
    components: list[list[str]] = []

    def strongconnect(node: str) -> None:
        worklist = [(node, iter(graph[node]))]
        index[node] = lowlink[node] = index_counter[0]
        index_counter[0] += 1
        stack.append(node)
        on_stack.add(node)
        while worklist:
            current, it = worklist[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = lowlink[nxt] = index_counter[0]
                    index_counter[0] += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    worklist.append((nxt, iter(graph[nxt])))
                    advanced = True
                    break
                if nxt in on_stack:
                    lowlink[current] = min(lowlink[current], index[nxt])
            if advanced:
                continue
            worklist.pop()
            if worklist:
                parent = worklist[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[current])
            if lowlink[current] == index[current]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.append(w)
                    if w == current:
                        break
                if len(component) > 1:
                    components.append(sorted(component))

    for node in sorted(graph):
        if node not in index:
            strongconnect(node)
    return components


def resolve_circular_imports(project: SkeletonProject) -> SkeletonProject:
    """Demotes imports until the module-level import graph is acyclic.

    Inheritance imports cannot move into method bodies (the class statement
    needs its bases at module level), so they are never demotion candidates.
    Among the demotable imports of a cycle, the lexicographically latest
    importing module loses its module-level import.
    """
    while True:
        cycles = _import_cycles(project.modules)
        if not cycles:
            return project
        for cycle in cycles:
            candidates: list[tuple[str, str]] = []
            for module in cycle:
                plan = project.modules[module]
                base_names = {base for cls in plan.classes for base in cls.base_classes}
                for partner in plan.imports:
                    if partner in cycle and partner != module \
                            and not (plan.imports[partner] & base_names):
                        candidates.append((module, partner))
            if not candidates:
                raise RuntimeError(
                    f"import cycle {cycle} consists of inheritance edges only")
            later = max(m for m, _ in candidates)
            for module, partner in candidates:
                if module == later:
                    _demote(project.modules[module], partner, project)


def _demote(plan: ModulePlan, partner: str, project: SkeletonProject) -> None:
    names = plan.imports.pop(partner)
    plan.local_only.add(partner)
    import_line = f"from {partner} import {', '.join(sorted(names))}"
    pattern = re.compile(r"\b(" + "|".join(re.escape(n) for n in sorted(names)) + r")\b")
    for cls in plan.classes:
        for fstub in cls.field_stubs:
            if pattern.search(fstub.annotation):
                fstub.quote = True
        for mstub in cls.method_stubs:
            mstub.quote_types |= names
            if _method_touches(mstub, names, project):
                if import_line not in mstub.local_imports:
                    mstub.local_imports.append(import_line)


def _method_touches(stub, names: set[str], project: SkeletonProject) -> bool:
    """A method needs the local import when its signature or callees use the
    demoted classes (translated bodies will reference them at runtime)."""
    if stub.callee_classes & names:
        return True
    anns = [ann for _, ann in stub.params if ann]
    if stub.return_annotation:
        anns.append(stub.return_annotation)
    return any(re.search(rf"\b{re.escape(n)}\b", ann) for n in names for ann in anns)
