"""Translation order: back-edge removal and the callee-before-caller law."""

from __future__ import annotations

import random

from fragport.decompose import order_fragments, order_graph
from fragport.sourcemodel.extract import parse_repository
from fragport.sourcemodel.model import SourceRepo


def check_order(nodes, edges, roots):
    postorder, back_edges = order_graph(sorted(nodes), set(edges), roots)
    assert sorted(postorder) == sorted(nodes)
    pos = {n: i for i, n in enumerate(postorder)}
    for a, b in edges:
        if (a, b) in back_edges:
            continue
        assert pos[b] < pos[a], f"callee {b} must precede caller {a}"
    # acyclicity of the remainder: callee-before-caller is itself a witness
    return back_edges


class TestOrderGraph:
    def test_chain_reverses(self):
        postorder, back = order_graph(["A", "B", "C"], {("A", "B"), ("B", "C")}, ["A"])
        assert postorder == ["C", "B", "A"]
        assert back == set()

    def test_two_cycle_removes_one_edge(self):
        back = check_order(["A", "B"], {("A", "B"), ("B", "A")}, ["A"])
        assert len(back) == 1

    def test_self_loop_is_back_edge(self):
        back = check_order(["A"], {("A", "A")}, ["A"])
        assert back == {("A", "A")}

    def test_random_graphs_respect_order(self):
        rng = random.Random(20240811)
        for trial in range(200):
            n = rng.randint(2, 30)
            nodes = [f"n{i:02d}" for i in range(n)]
            edges = set()
            for _ in range(rng.randint(1, 3 * n)):
                a, b = rng.choice(nodes), rng.choice(nodes)
                edges.add((a, b))
            roots = rng.sample(nodes, k=rng.randint(1, max(1, n // 3)))
            check_order(nodes, edges, roots)

    def test_deterministic(self):
        edges = {("a", "b"), ("b", "c"), ("c", "a"), ("d", "b")}
        first = order_graph(["a", "b", "c", "d"], edges, ["d"])
        second = order_graph(["a", "b", "c", "d"], edges, ["d"])
        assert first == second


class TestOrderFragments:
    def test_fixture_order_properties(self, prepared_work, prepared_schema):
        order = order_fragments(prepared_schema)
        methods = {f.id for f in
                   prepared_schema.fragments_of_kind("application_method", "test_method")}
        fields = {f.id for f in prepared_schema.fragments_of_kind("field")}
        assert set(order.sequence) == methods | fields
        # fields strictly precede methods
        first_method = min(order.sequence.index(m) for m in methods)
        last_field = max(order.sequence.index(f) for f in fields)
        assert last_field < first_method
        pos = {fid: i for i, fid in enumerate(order.sequence)}
        for a, b in prepared_schema.call_graph.edges:
            if a in methods and b in methods and (a, b) not in order.removed_back_edges:
                assert pos[b] < pos[a]

    def test_fixture_two_cycle_breaks(self, prepared_schema):
        order = order_fragments(prepared_schema)
        assert len(order.removed_back_edges) == 1
        (edge,) = order.removed_back_edges
        names = {edge[0].split("@")[0], edge[1].split("@")[0]}
        assert names == {"minilib.core.Entry#depth()",
                         "minilib.core.Registry#chainLength(Entry)"}
