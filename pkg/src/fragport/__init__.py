"""Repository-level source-to-target code translation pipeline."""

__version__ = "0.1.0"
