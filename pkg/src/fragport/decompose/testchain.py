"""Unit-test slicing into cumulative test fragments.

Every top-level statement that directly invokes an application method is a
cutting point; fragment k contains all statements up to and including the
k-th cutting point, so each successive fragment introduces exactly one new
application call. Statements nested in branches/loops/try blocks ride with
their whole top-level statement. Trailing statements with no application call
attach to the last fragment.

Setup methods (@Before) are not textually duplicated: each fragment executes
within its declaring test class context, where the translated setup method
runs before it; setup calls still count toward the chain's exercised sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fragport.javamini import ast as J
from fragport.sourcemodel.extract import _walk_stmt
from fragport.sourcemodel.model import Fragment, Schema, SourceRepo
from fragport.sourcemodel.typeindex import (
    ClassIndex, MethodContext, resolve_call, resolve_new, type_ref_to_type,
)


@dataclass
class TestFragment:
    index: int
    code: str
    newly_exercised: str | None          # app fragment id introduced by this slice
    enclosing_blocks_included: bool
    statement_count: int                 # top-level statements included
    exercised_direct: list[str] = field(default_factory=list)
    exercised_closure: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "index": self.index, "code": self.code,
            "newly_exercised": self.newly_exercised,
            "enclosing_blocks_included": self.enclosing_blocks_included,
            "statement_count": self.statement_count,
            "exercised_direct": self.exercised_direct,
            "exercised_closure": self.exercised_closure,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TestFragment":
        return cls(**data)


@dataclass
class TestFragmentChain:
    origin_test: str                     # fragment id of the unit test
    class_qname: str
    method_name: str
    setup_methods: list[str]             # fragment ids of @Before methods
    fragments: list[TestFragment]

    @property
    def chain_id(self) -> str:
        return self.origin_test

    def fragment_id(self, index: int) -> str:
        return f"{self.origin_test}#{index}"

    def to_dict(self) -> dict:
        return {
            "origin_test": self.origin_test,
            "class_qname": self.class_qname,
            "method_name": self.method_name,
            "setup_methods": self.setup_methods,
            "fragments": [f.to_dict() for f in self.fragments],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TestFragmentChain":
        return cls(
            origin_test=data["origin_test"],
            class_qname=data["class_qname"],
            method_name=data["method_name"],
            setup_methods=list(data["setup_methods"]),
            fragments=[TestFragment.from_dict(f) for f in data["fragments"]],
        )


BLOCK_STMTS = (J.If, J.While, J.For, J.Try, J.Block)


def _find_method(index: ClassIndex, fragment: Fragment) -> tuple[object, J.MethodDecl]:
    entry = index.entries[fragment.class_qname]
    for m in entry.decl.methods:
        if m.signature() == fragment.signature:
            return entry, m
    raise KeyError(f"method {fragment.qualified_signature} not found in parsed tree")


def _direct_app_calls(stmt: J.Stmt, ctx: MethodContext, schema: Schema,
                      entry) -> list[tuple[str, J.Span]]:
    """(fragment id, call span) for every directly invoked repo method/ctor."""
    by_sig = schema.by_qualified_signature()
    found: list[tuple[str, J.Span]] = []

    def on_site(node, site_ctx: MethodContext) -> None:
        if isinstance(node, J.Call):
            resolved = resolve_call(node, site_ctx)
            root = resolved.dispatch_root
        elif isinstance(node, J.New):
            resolved = resolve_new(node, site_ctx)
            root = resolved.dispatch_root
        elif isinstance(node, J.ThisCall):
            return
        else:  # SuperCall
            return
        if root is None:
            return
        frag = by_sig.get(f"{root[0]}#{root[1].signature()}")
        if frag is not None:
            found.append((frag.id, node.span))

    _walk_stmt(stmt, ctx, on_site)
    return found


def _closure(seeds: set[str], schema: Schema) -> set[str]:
    adjacency: dict[str, set[str]] = {}
    for a, b in schema.call_graph.edges:
        adjacency.setdefault(a, set()).add(b)
    seen: set[str] = set()
    stack = list(seeds)
    while stack:
        node = stack.pop()
        if node in seen or node not in {f.id for f in schema.fragments}:
            continue
        seen.add(node)
        stack.extend(adjacency.get(node, ()))
    app_ids = {f.id for f in schema.fragments_of_kind("application_method")}
    return seen & app_ids


def decompose_test(test: Fragment, schema: Schema, index: ClassIndex) -> TestFragmentChain:
    entry, method = _find_method(index, test)
    source = entry.unit.source
    ctx = MethodContext(index, entry, method)
    for p in method.params:
        ctx.locals[p.name] = type_ref_to_type(p.type, ctx)

    setup_ids = []
    by_sig = schema.by_qualified_signature()
    for m in entry.decl.methods:
        if "Before" in m.annotations or "BeforeEach" in m.annotations:
            frag = by_sig.get(f"{entry.qname}#{m.signature()}")
            if frag is not None:
                setup_ids.append(frag.id)

    statements = method.body.statements if method.body else []
    per_stmt_calls: list[list[tuple[str, J.Span]]] = []
    for stmt in statements:
        per_stmt_calls.append(_direct_app_calls(stmt, ctx, schema, entry))

    # cutting points: statements introducing at least one new application call
    cut_indices: list[tuple[int, str]] = []        # (stmt index, newly exercised id)
    seen_calls: set[str] = set()
    for i, calls in enumerate(per_stmt_calls):
        app_calls = [(fid, span) for fid, span in calls
                     if schema.fragment_by_id(fid).kind == "application_method"]
        new_calls = [(fid, span) for fid, span in app_calls if fid not in seen_calls]
        if new_calls:
            # the outermost new call: widest span, last wins ties
            newly = max(new_calls, key=lambda t: (t[1].end_offset - t[1].start_offset,
                                                  new_calls.index(t)))[0]
            cut_indices.append((i, newly))
        seen_calls.update(fid for fid, _ in app_calls)

    lines = source.splitlines()

    def slice_statements(upto: int) -> str:
        if not statements:
            return ""
        start = statements[0].span.start_line
        end = statements[upto].span.end_line
        return "\n".join(lines[start - 1:end])

    fragments: list[TestFragment] = []
    if not cut_indices:
        # NoCutPoints: the whole test as one fragment
        code = slice_statements(len(statements) - 1) if statements else ""
        fragments.append(TestFragment(
            index=0, code=code, newly_exercised=None,
            enclosing_blocks_included=any(isinstance(s, BLOCK_STMTS) for s in statements),
            statement_count=len(statements),
        ))
    else:
        direct_cum: set[str] = set()
        for k, (stmt_idx, newly) in enumerate(cut_indices):
            last = k == len(cut_indices) - 1
            upto = len(statements) - 1 if last else stmt_idx
            for i in range(stmt_idx + 1):
                direct_cum.update(
                    fid for fid, _ in per_stmt_calls[i]
                    if schema.fragment_by_id(fid).kind == "application_method")
            fragments.append(TestFragment(
                index=k,
                code=slice_statements(upto),
                newly_exercised=newly,
                enclosing_blocks_included=any(
                    isinstance(statements[i], BLOCK_STMTS) for i in range(upto + 1)),
                statement_count=upto + 1,
                exercised_direct=sorted(direct_cum),
            ))

    # transitive closures, including setup effects
    setup_seeds = set(setup_ids)
    for frag in fragments:
        seeds = setup_seeds | set(frag.exercised_direct)
        frag.exercised_closure = sorted(_closure(seeds, schema))
    return TestFragmentChain(
        origin_test=test.id,
        class_qname=test.class_qname,
        method_name=test.name,
        setup_methods=setup_ids,
        fragments=fragments,
    )


def decompose_all(repo: SourceRepo, schema: Schema, index: ClassIndex | None = None,
                  ) -> list[TestFragmentChain]:
    """Chains for every @Test fragment, persisted into schema.test_chains."""
    if index is None:
        from fragport.sourcemodel.extract import build_index
        index = build_index(repo)
    chains = []
    for frag in schema.fragments_of_kind("test_method"):
        if "Test" in frag.annotations:
            chains.append(decompose_test(frag, schema, index))
    chains.sort(key=lambda c: c.origin_test)
    schema.test_chains = [c.to_dict() for c in chains]
    return chains


def execute_chain(chain: TestFragmentChain, runner) -> list:
    """Runs fragments in increasing index order, short-circuiting at the first
    failure; skipped fragments are labeled, not run.

    runner(chain, fragment) -> TestCaseResult
    """
    from fragport.execharness.results import TestCaseResult

    results = []
    failed = False
    for frag in chain.fragments:
        if failed:
            results.append(TestCaseResult(chain.fragment_id(frag.index), "skipped"))
            continue
        outcome = runner(chain, frag)
        results.append(outcome)
        if outcome.status != "pass":
            failed = True
    return results
