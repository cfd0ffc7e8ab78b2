"""Translation ordering: back-edge removal and reverse topological order.

The ordering graph is the call graph restricted to method fragments (fields
are independent and always precede methods). One deterministic DFS pass marks
retreating edges as back edges and emits a postorder; postorder of a
caller->callee DAG puts every callee before its callers, which is exactly the
translation order the pipeline wants.

DFS starts from test roots, then sweeps any remaining unvisited fragments;
roots and neighbor sets are visited in fragment-id order so the result is
stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from fragport.sourcemodel.model import Schema

WHITE, GRAY, BLACK = 0, 1, 2


@dataclass
class TranslationOrder:
    sequence: list[str]                         # fields first, then methods
    removed_back_edges: set[tuple[str, str]] = field(default_factory=set)

    def position(self, fragment_id: str) -> int:
        return self._pos()[fragment_id]

    def _pos(self) -> dict[str, int]:
        cached = getattr(self, "_positions", None)
        if cached is None:
            cached = {fid: i for i, fid in enumerate(self.sequence)}
            object.__setattr__(self, "_positions", cached)
        return cached


def order_graph(nodes: list[str], edges: set[tuple[str, str]],
                roots: list[str]) -> tuple[list[str], set[tuple[str, str]]]:
    """(postorder, back_edges) for an arbitrary directed graph."""
    adjacency: dict[str, list[str]] = {n: [] for n in nodes}
    for a, b in edges:
        if a in adjacency and b in adjacency:
            adjacency[a].append(b)
    for n in adjacency:
        adjacency[n] = sorted(set(adjacency[n]))

    color = {n: WHITE for n in nodes}
    postorder: list[str] = []
    back_edges: set[tuple[str, str]] = set()

    def dfs(start: str) -> None:
        stack: list[tuple[str, int]] = [(start, 0)]
        color[start] = GRAY
        while stack:
            node, child_idx = stack[-1]
            neighbors = adjacency[node]
            if child_idx < len(neighbors):
                stack[-1] = (node, child_idx + 1)
                nxt = neighbors[child_idx]
                if color[nxt] == GRAY:
                    back_edges.add((node, nxt))
                elif color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, 0))
            else:
                color[node] = BLACK
                postorder.append(node)
                stack.pop()

    for root in sorted(roots):
        if color.get(root) == WHITE:
            dfs(root)
    for node in sorted(nodes):
        if color[node] == WHITE:
            dfs(node)
    return postorder, back_edges


def order_fragments(schema: Schema) -> TranslationOrder:
    methods = [f.id for f in schema.fragments_of_kind("application_method", "test_method")]
    method_set = set(methods)
    edges = {(a, b) for a, b in schema.call_graph.edges
             if a in method_set and b in method_set}
    roots = [f.id for f in schema.fragments_of_kind("test_method")]
    postorder, back_edges = order_graph(sorted(methods), edges, roots)
    fields = sorted(f.id for f in schema.fragments_of_kind("field"))
    schema.call_graph.back_edges = back_edges
    return TranslationOrder(sequence=fields + postorder, removed_back_edges=back_edges)
