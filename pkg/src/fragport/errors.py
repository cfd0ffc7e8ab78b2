"""Exception types shared across the pipeline stages."""

from __future__ import annotations


class FragportError(Exception):
    """Base class for all pipeline errors."""


class ParseError(FragportError):
    def __init__(self, message: str, file: str | None = None, line: int | None = None):
        self.file = file
        self.line = line
        where = ""
        if file is not None:
            where = f" [{file}" + (f":{line}" if line is not None else "") + "]"
        super().__init__(message + where)


class BuildDescriptorMissing(FragportError):
    pass


class TestRunFailure(FragportError):
    def __init__(self, message: str, log: str = ""):
        super().__init__(message)
        self.log = log


class BuildFailure(FragportError):
    def __init__(self, message: str, log: str = ""):
        super().__init__(message)
        self.log = log


class VersionMismatch(FragportError):
    pass


class CorruptSchema(FragportError):
    pass


class AmbiguousCallSite(FragportError):
    pass


class UnsupportedChain(FragportError):
    pass


class NoCutPoints(FragportError):
    pass


class BackendError(FragportError):
    pass


class CacheMiss(BackendError):
    pass


class EmptyCandidate(FragportError):
    pass


class SandboxError(FragportError):
    pass


class NoCode(FragportError):
    pass


class ContextOverflow(FragportError):
    def __init__(self, message: str, estimated_tokens: int = 0, limit: int = 0):
        super().__init__(message)
        self.estimated_tokens = estimated_tokens
        self.limit = limit


class UnmappedType(FragportError):
    def __init__(self, message: str, offending: list[str] | None = None):
        super().__init__(message)
        self.offending = offending or []


class StubNotFound(FragportError):
    pass


class PostInsertImportFailure(FragportError):
    def __init__(self, message: str, log: str = ""):
        super().__init__(message)
        self.log = log


class RunnerUnavailable(FragportError):
    pass


class ConfigError(FragportError):
    pass


class UnsupportedSignature(FragportError):
    pass
