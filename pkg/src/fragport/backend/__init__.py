"""Prompt crafting, in-context example selection, completion backends."""

from fragport.backend.backends import (
    Backend, HttpChatBackend, MockStubBackend, ReplayCacheBackend, complete,
)
from fragport.backend.extract import extract_code, is_parseable, normalize_code
from fragport.backend.icl import ICLPool, select_icl
from fragport.backend.prompt import (
    RESPONSE_CUE, PromptBundle, craft_prompt, estimate_tokens,
)

__all__ = [
    "Backend", "HttpChatBackend", "ICLPool", "MockStubBackend", "PromptBundle",
    "RESPONSE_CUE", "ReplayCacheBackend", "complete", "craft_prompt",
    "estimate_tokens", "extract_code", "is_parseable", "normalize_code", "select_icl",
]
