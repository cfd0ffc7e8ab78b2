"""Tokenizer for the supported Java subset.

Produces a flat token stream with 1-based line/column positions; the parser
and the rewrite planner both rely on exact token spans, so every token keeps
the offset range it was read from.
"""

from __future__ import annotations

from dataclasses import dataclass

from fragport.errors import ParseError

KEYWORDS = {
    "abstract", "boolean", "break", "catch", "char", "class", "continue",
    "double", "else", "extends", "final", "finally", "for", "if",
    "implements", "import", "int", "interface", "new", "null", "package",
    "private", "protected", "public", "return", "static", "super", "this",
    "throw", "throws", "try", "void", "while", "true", "false", "long",
    "float", "short", "byte", "instanceof",
}

# Longest-match-first operator table.
OPERATORS = [
    "<<=", ">>=", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "->",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "?", ":",
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "@",
]


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | int | double | string | char | op | eof
    text: str
    line: int
    col: int
    offset: int
    end_offset: int

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"Token({self.kind!r}, {self.text!r}, L{self.line}:{self.col})"


def tokenize(source: str, file: str = "<source>") -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def error(msg: str) -> ParseError:
        return ParseError(msg, file=file, line=line)

    def advance(count: int) -> None:
        nonlocal i, line, col
        for _ in range(count):
            if source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                advance(1)
            continue
        if source.startswith("/*", i):
            advance(2)
            while i < n and not source.startswith("*/", i):
                advance(1)
            if i >= n:
                raise error("unterminated block comment")
            advance(2)
            continue

        start_line, start_col, start_off = line, col, i

        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            kind = "keyword" if text in KEYWORDS else "ident"
            advance(j - i)
            tokens.append(Token(kind, text, start_line, start_col, start_off, j))
            continue

        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            kind = "int"
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                kind = "double"
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "LlFfDd":
                j += 1
            text = source[i:j]
            advance(j - i)
            tokens.append(Token(kind, text, start_line, start_col, start_off, j))
            continue

        if ch == '"':
            j = i + 1
            buf = []
            while j < n and source[j] != '"':
                if source[j] == "\\":
                    if j + 1 >= n:
                        raise error("unterminated string escape")
                    buf.append(_unescape(source[j + 1]))
                    j += 2
                elif source[j] == "\n":
                    raise error("newline in string literal")
                else:
                    buf.append(source[j])
                    j += 1
            if j >= n:
                raise error("unterminated string literal")
            advance(j + 1 - i)
            tokens.append(Token("string", "".join(buf), start_line, start_col, start_off, j + 1))
            continue

        if ch == "'":
            j = i + 1
            if j < n and source[j] == "\\":
                if j + 1 >= n:
                    raise error("unterminated char literal")
                value = _unescape(source[j + 1])
                j += 2
            elif j < n:
                value = source[j]
                j += 1
            else:
                raise error("unterminated char literal")
            if j >= n or source[j] != "'":
                raise error("unterminated char literal")
            advance(j + 1 - i)
            tokens.append(Token("char", value, start_line, start_col, start_off, j + 1))
            continue

        for op in OPERATORS:
            if source.startswith(op, i):
                advance(len(op))
                tokens.append(Token("op", op, start_line, start_col, start_off, start_off + len(op)))
                break
        else:
            raise error(f"unexpected character {ch!r}")

    tokens.append(Token("eof", "", line, col, i, i))
    return tokens


def _unescape(ch: str) -> str:
    table = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", '"': '"', "'": "'", "0": "\0", "b": "\b"}
    return table.get(ch, ch)
