"""Prompt assembly: five-part structure ending with the response cue.

Assembly is a pure function of (fragment, schema, skeleton snapshot,
feedback): identical inputs produce byte-identical prompts. Token budgeting
uses a chars/4 estimate with a 10% safety margin; when the callee snippets
overflow the window they are truncated to their signature lines
farthest-first, and if the prompt still does not fit, ContextOverflow is
raised with the measured estimate.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from fragport.errors import ContextOverflow
from fragport.sourcemodel.model import Schema

RESPONSE_CUE = "### Response:"
OVERFLOW_MARGIN = 0.10

_TEMPLATE_FILE = "prompts/translation.txt"
_PERSONA_FILE = "prompts/persona.txt"


def _read_data(name: str) -> str:
    return resources.files("fragport.data").joinpath(name).read_text(encoding="utf-8")


def estimate_tokens(text: str) -> int:
    return math.ceil(len(text) / 4)


@dataclass
class PromptBundle:
    fragment_id: str
    persona: str
    icl_example: str
    instruction: str
    source_code: str
    partial_translation: str
    response_cue: str = RESPONSE_CUE
    feedback: str | None = None
    stub_code: str = ""

    def render(self) -> str:
        template = _read_data(_TEMPLATE_FILE)
        feedback_section = ""
        if self.feedback:
            feedback_section = f"\n### Feedback from the previous attempt:\n{self.feedback}\n"
        text = template.format(
            persona=self.persona,
            icl_example=self.icl_example,
            instruction=self.instruction,
            source_code=self.source_code,
            partial_translation=self.partial_translation,
            feedback_section=feedback_section,
        ).rstrip()
        if not text.endswith(self.response_cue):
            text += f"\n{self.response_cue}"
        return text

    @property
    def prompt_hash(self) -> str:
        return hashlib.sha256(self.render().encode("utf-8")).hexdigest()[:16]


def _class_context(fragment, schema: Schema) -> str:
    """Class declaration plus field fragments of the declaring class."""
    lines = []
    try:
        record = schema.class_by_name(fragment.class_qname)
        supers = f" extends {', '.join(record.supertypes)}" if record.supertypes else ""
        lines.append(f"// class {fragment.class_qname}{supers}")
    except KeyError:
        lines.append(f"// class {fragment.class_qname}")
    for frag in schema.fragments:
        if frag.class_qname == fragment.class_qname and frag.kind == "field":
            lines.append(frag.code)
    return "\n".join(lines)


def _manifest_slice(skeleton_root: Path, manifest: dict, fragment_id: str) -> str:
    entry = manifest.get(fragment_id)
    if entry is None:
        return ""
    text = (skeleton_root / entry["file"]).read_text(encoding="utf-8")
    lines = text.splitlines()
    return "\n".join(lines[entry["start_line"] - 1:entry["end_line"]])


def _signature_only(snippet: str) -> str:
    for line in snippet.splitlines():
        if line.lstrip().startswith("def "):
            return line.rstrip()
    return snippet.splitlines()[0] if snippet else ""


def craft_prompt(fragment, schema: Schema, skeleton_root: str | Path, manifest: dict,
                 translated: set[str], icl_example: str, feedback: str | None = None,
                 context_limit: int = 16384,
                 positions: dict[str, int] | None = None) -> PromptBundle:
    """Builds the bundle for one fragment against the current skeleton state.

    `translated` holds fragment ids whose translations are already in the
    skeleton; their current target text is embedded as context. `positions`
    (translation-order positions) decides which callees are farthest for
    truncation; lower position = deeper dependency = truncated first.
    """
    skeleton_root = Path(skeleton_root)
    persona = _read_data(_PERSONA_FILE).strip()
    instruction = ("Translate the following source fragment to Python 3. Use the "
                   "partial translation for names, signatures and already translated "
                   "dependencies. Reply with one fenced code block containing only "
                   "the translated fragment.")
    source_code = _class_context(fragment, schema) + "\n\n" + fragment.code

    own_module = ""
    entry = manifest.get(fragment.id)
    if entry is not None:
        own_module = (skeleton_root / entry["file"]).read_text(encoding="utf-8")

    callee_ids = sorted(set(fragment.callees) & translated,
                        key=lambda fid: (positions.get(fid, 0) if positions else 0, fid))
    callee_snippets = {fid: _manifest_slice(skeleton_root, manifest, fid)
                       for fid in callee_ids}

    def assemble(snippets: dict[str, str]) -> PromptBundle:
        parts = [own_module.rstrip()]
        for fid in callee_ids:
            snippet = snippets[fid]
            if snippet and snippet not in own_module:
                parts.append(f"# dependency {fid.split('@')[0]}\n{snippet}")
        return PromptBundle(
            fragment_id=fragment.id,
            persona=persona,
            icl_example=icl_example,
            instruction=instruction,
            source_code=source_code,
            partial_translation="\n\n".join(p for p in parts if p),
            feedback=feedback,
            stub_code=_manifest_slice(skeleton_root, manifest, fragment.id),
        )

    budget = int(context_limit * (1 - OVERFLOW_MARGIN))
    bundle = assemble(callee_snippets)
    if estimate_tokens(bundle.render()) <= budget:
        return bundle
    truncated = dict(callee_snippets)
    for fid in callee_ids:  # farthest first
        truncated[fid] = _signature_only(truncated[fid])
        bundle = assemble(truncated)
        if estimate_tokens(bundle.render()) <= budget:
            return bundle
    measured = estimate_tokens(bundle.render())
    raise ContextOverflow(
        f"prompt for {fragment.id} estimates {measured} tokens over budget {budget}",
        estimated_tokens=measured, limit=budget)
