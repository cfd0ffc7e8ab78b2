"""Prompt structure, ICL selection, backends, code extraction."""

from __future__ import annotations

import json

import pytest

from fragport.backend import (
    ICLPool, MockStubBackend, PromptBundle, RESPONSE_CUE, ReplayCacheBackend,
    craft_prompt, estimate_tokens, extract_code,
)
from fragport.errors import CacheMiss, ContextOverflow, NoCode
from fragport.skeleton import load_manifest
from fragport.sourcemodel.store import load_schema


@pytest.fixture(scope="module")
def pool():
    return ICLPool.load()


def frag_by_name(schema, qsig: str):
    return schema.by_qualified_signature()[qsig]


class TestPromptStructure:
    def test_five_parts_in_order_and_cue_last(self, prepared_work, prepared_schema, pool):
        frag = frag_by_name(prepared_schema, "minilib.core.Option#resolve(String)")
        bundle = craft_prompt(frag, prepared_schema, prepared_work.skeleton_root,
                              load_manifest(prepared_work.skeleton_root),
                              translated=set(), icl_example=pool.select(frag))
        text = bundle.render()
        order = [text.index(bundle.persona.splitlines()[0]),
                 text.index("### In-context example:"),
                 text.index("### Instruction:"),
                 text.index("### Source code:"),
                 text.index("### Partial translation")]
        assert order == sorted(order)
        assert text.endswith(RESPONSE_CUE)

    def test_leaf_partial_translation_is_class_slice_only(
            self, prepared_work, prepared_schema, pool):
        frag = frag_by_name(prepared_schema, "minilib.core.Tokens#width(String)")
        bundle = craft_prompt(frag, prepared_schema, prepared_work.skeleton_root,
                              load_manifest(prepared_work.skeleton_root),
                              translated=set(), icl_example=pool.select(frag))
        assert "class Tokens:" in bundle.partial_translation
        assert "# dependency" not in bundle.partial_translation

    def test_translated_callees_embedded(self, prepared_work, prepared_schema, pool, tmp_path):
        import shutil

        from fragport.skeleton import insert_fragment

        root = tmp_path / "skel"
        shutil.copytree(prepared_work.skeleton_root, root)
        callee1 = frag_by_name(prepared_schema, "minilib.core.Flag#getName()")
        callee2 = frag_by_name(prepared_schema, "minilib.core.Catalog#add0(String)")
        insert_fragment(root, callee1.id,
                        "def getName(self) -> str:\n    return self.__name")
        insert_fragment(root, callee2.id,
                        "def add0(self, name: str) -> None:\n"
                        "    self.__names.append(name)\n"
                        "    self.__registry.register(name)")
        caller = frag_by_name(prepared_schema, "minilib.core.Catalog#add1(Flag)")
        bundle = craft_prompt(caller, prepared_schema, root, load_manifest(root),
                              translated={callee1.id, callee2.id},
                              icl_example=pool.select(caller))
        assert "return self.__name" in bundle.partial_translation
        assert "self.__registry.register(name)" in bundle.partial_translation

    def test_feedback_appended_before_cue(self, prepared_work, prepared_schema, pool):
        frag = frag_by_name(prepared_schema, "minilib.core.Tokens#width(String)")
        bundle = craft_prompt(frag, prepared_schema, prepared_work.skeleton_root,
                              load_manifest(prepared_work.skeleton_root),
                              translated=set(), icl_example=pool.select(frag),
                              feedback="SyntaxError: bad indent")
        text = bundle.render()
        assert "SyntaxError: bad indent" in text
        assert text.index("SyntaxError") < text.index(RESPONSE_CUE)

    def test_prompt_is_pure_function_of_inputs(self, prepared_work, prepared_schema, pool):
        frag = frag_by_name(prepared_schema, "minilib.core.Range#clamp(int)")
        manifest = load_manifest(prepared_work.skeleton_root)
        one = craft_prompt(frag, prepared_schema, prepared_work.skeleton_root, manifest,
                           translated=set(), icl_example=pool.select(frag)).render()
        two = craft_prompt(frag, prepared_schema, prepared_work.skeleton_root, manifest,
                           translated=set(), icl_example=pool.select(frag)).render()
        assert one == two

    def test_context_overflow_raises_with_estimate(self, prepared_work, prepared_schema, pool):
        frag = frag_by_name(prepared_schema, "minilib.core.Catalog#summary()")
        with pytest.raises(ContextOverflow) as err:
            craft_prompt(frag, prepared_schema, prepared_work.skeleton_root,
                         load_manifest(prepared_work.skeleton_root),
                         translated=set(), icl_example=pool.select(frag),
                         context_limit=100)
        assert err.value.estimated_tokens > err.value.limit

    def test_token_estimate_heuristic(self):
        assert estimate_tokens("abcd" * 10) == 10
        assert estimate_tokens("abc") == 1


class TestICLSelection:
    def test_assert_kinds_map_to_examples(self, prepared_schema, pool):
        frag = frag_by_name(prepared_schema,
                            "minilib.core.RangeTest#rejectsInvertedBounds()")
        example = pool.select(frag)
        assert example != pool.fallback
        assert "fail(" in frag.code

    def test_every_fixture_assert_kind_has_entry(self, prepared_schema, pool):
        for frag in prepared_schema.fragments_of_kind("test_method"):
            for kind in pool.assert_kinds_in(frag.code):
                assert kind in pool.assert_examples, kind

    def test_application_feature_selection(self, prepared_schema, pool):
        loopy = frag_by_name(prepared_schema, "minilib.core.Tokens#countSep(String,char)")
        assert "for i in range" in pool.select(loopy)

    def test_no_feature_falls_back(self, pool):
        class Bare:
            kind = "application_method"
            code = "return;"
            id = "X#bare()@0"
        assert pool.select(Bare()) == pool.fallback

    def test_selection_deterministic(self, prepared_schema, pool):
        frag = frag_by_name(prepared_schema, "minilib.core.Catalog#summary()")
        assert pool.select(frag) == pool.select(frag)


class TestExtractCode:
    def test_single_fenced_block(self):
        assert extract_code("text\n```python\nx = 1\n```\nmore") == "x = 1\n"

    def test_prose_only_raises(self):
        with pytest.raises(NoCode):
            extract_code("I am sorry, I cannot translate that method.")

    def test_unfenced_code_kept_when_parseable(self):
        assert extract_code("def f():\n    return 2\n") == "def f():\n    return 2\n"

    def test_trailing_garbage_inside_fence_flagged_by_parse_gate(self):
        code = extract_code("```python\ndef f():\n    return 2\nand then some prose\n```")
        from fragport.backend import is_parseable

        assert not is_parseable(code)

    def test_normalization_strips_trailing_space_and_dedents(self):
        out = extract_code("```\n    def f():   \n        return 1\n```")
        assert out == "def f():\n    return 1\n"


class TestBackends:
    def _bundle(self, fragment_id="a.B#c()@1234", stub="def c(self):\n    pass"):
        return PromptBundle(fragment_id=fragment_id, persona="p", icl_example="i",
                            instruction="t", source_code="s", partial_translation="pt",
                            stub_code=stub)

    def test_replay_hit_and_per_attempt_override(self, tmp_path):
        (tmp_path / "base.json").write_text(json.dumps(
            {"fragment_id": "a.B#c()@1234", "completion": "zero"}))
        (tmp_path / "one.json").write_text(json.dumps(
            {"fragment_id": "a.B#c()@1234", "attempt": 1, "completion": "one"}))
        backend = ReplayCacheBackend(tmp_path)
        assert backend.complete(self._bundle(), attempt=0) == "zero"
        assert backend.complete(self._bundle(), attempt=1) == "one"
        assert backend.complete(self._bundle(), attempt=5) == "zero"  # base fallback

    def test_replay_miss_raises(self, tmp_path):
        backend = ReplayCacheBackend(tmp_path)
        with pytest.raises(CacheMiss):
            backend.complete(self._bundle("missing#x()@0"))

    def test_strict_mode_rejects_hash_mismatch(self, tmp_path):
        bundle = self._bundle()
        (tmp_path / "e.json").write_text(json.dumps(
            {"fragment_id": bundle.fragment_id, "completion": "text",
             "prompt_hash": "not-the-real-hash"}))
        strict = ReplayCacheBackend(tmp_path, strict=True)
        with pytest.raises(CacheMiss):
            strict.complete(bundle)
        lenient = ReplayCacheBackend(tmp_path, strict=False)
        assert lenient.complete(bundle) == "text"

    def test_mock_returns_stub_body(self):
        backend = MockStubBackend()
        out = backend.complete(self._bundle())
        assert "def c(self)" in out

    def test_mock_per_fragment_override(self):
        backend = MockStubBackend(per_fragment={"a.B#c()@1234": "custom"})
        assert backend.complete(self._bundle()) == "custom"
