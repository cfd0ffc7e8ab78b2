"""Overload discovery and constructor-pattern classification."""

from __future__ import annotations

from dataclasses import dataclass

from fragport.errors import AmbiguousCallSite
from fragport.javamini import ast as J
from fragport.sourcemodel.typeindex import ClassIndex


@dataclass
class OverloadGroup:
    owner_class: str                    # qualified class name
    name: str
    members: list[J.MethodDecl]         # declaration order
    kind: str                           # method | constructor
    pattern: str | None = None          # independent | pure_this_chain | hybrid

    @property
    def member_signatures(self) -> list[str]:
        return [f"{self.owner_class}#{m.signature()}" for m in self.members]


def delegation_head(decl: J.MethodDecl) -> J.ThisCall | None:
    """The this(...) call when the constructor delegates, else None."""
    if decl.body is None or not decl.body.statements:
        return None
    first = decl.body.statements[0]
    if isinstance(first, J.ExprStmt) and isinstance(first.expr, J.ThisCall):
        return first.expr
    return None


def classify_constructor_pattern(group: OverloadGroup) -> str:
    """Total over constructor groups: independent / pure_this_chain / hybrid."""
    assert group.kind == "constructor"
    delegating = [m for m in group.members if delegation_head(m) is not None]
    if not delegating:
        return "independent"
    if all(len(m.body.statements) == 1 for m in delegating):
        return "pure_this_chain"
    return "hybrid"


def find_overload_groups(index: ClassIndex) -> tuple[list[OverloadGroup], list[OverloadGroup]]:
    """(method groups, constructor groups), deterministic order.

    Overloads spanning a class hierarchy cannot be renamed soundly from one
    class alone; they abort rather than guess.
    """
    method_groups: list[OverloadGroup] = []
    ctor_groups: list[OverloadGroup] = []
    for qname in sorted(index.entries):
        entry = index.entries[qname]
        by_name: dict[str, list[J.MethodDecl]] = {}
        for m in entry.decl.methods:
            if not m.is_constructor:
                by_name.setdefault(m.name, []).append(m)
        for name, members in sorted(by_name.items()):
            if len(members) < 2:
                continue
            for other_q in index.supertype_chain(qname) + index.subtypes_of(qname):
                if other_q != qname and index.entries[other_q].methods_named(name):
                    raise AmbiguousCallSite(
                        f"overloaded method {qname}.{name} is also declared in {other_q}; "
                        "hierarchy-spanning overloads are not rewritable")
            method_groups.append(OverloadGroup(qname, name, members, "method"))
        ctors = entry.constructors()
        if len(ctors) >= 2:
            group = OverloadGroup(qname, entry.simple_name, ctors, "constructor")
            group.pattern = classify_constructor_pattern(group)
            ctor_groups.append(group)
    return method_groups, ctor_groups
