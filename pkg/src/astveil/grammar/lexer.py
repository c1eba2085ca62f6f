"""Shared lexing machinery for the bundled grammars.

Tokens carry a `kind` that doubles as the AST leaf label: operator and
keyword tokens use their own text as the kind, literal tokens use a
per-language literal kind name. Synthetic tokens (newline / indent /
dedent / eof) never become AST leaves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

SYNTHETIC_KINDS = {"@newline", "@indent", "@dedent", "@eof"}


@dataclass(frozen=True)
class Token:
    kind: str
    start: int
    end: int
    error: bool = False

    @property
    def synthetic(self) -> bool:
        return self.kind in SYNTHETIC_KINDS


@dataclass
class RawNode:
    """Mutable parse-tree node; flattened into AstGraph after parsing."""

    kind: str
    start: int
    end: int
    children: list[tuple[str, "RawNode"]] = field(default_factory=list)
    error: bool = False
    missing: bool = False

    def add(self, child: "RawNode", label: str = "child") -> None:
        self.children.append((label, child))
        if child.start < self.start:
            self.start = child.start
        if child.end > self.end:
            self.end = child.end


def leaf(tok: Token) -> RawNode:
    return RawNode(tok.kind, tok.start, tok.end, error=tok.error)


def missing_leaf(kind: str, pos: int) -> RawNode:
    return RawNode(kind, pos, pos, missing=True)


def error_node(children: list[RawNode], pos: int) -> RawNode:
    node = RawNode("ERROR", pos, pos, error=True)
    for child in children:
        node.add(child)
    return node


class LexerBase:
    """Hand-rolled scanner; subclasses provide language tables."""

    keywords: frozenset[str] = frozenset()
    operators: tuple[str, ...] = ()
    line_comment: str = "//"
    block_comment: tuple[str, str] | None = ("/*", "*/")
    number_kind = "number_literal"
    string_kind = "string_literal"
    char_kind = "char_literal"
    keyword_kinds: dict[str, str] = {}

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.n = len(text)
        self.tokens: list[Token] = []

    def emit(self, kind: str, start: int, end: int, error: bool = False) -> None:
        self.tokens.append(Token(kind, start, end, error))

    def at(self, s: str) -> bool:
        return self.text.startswith(s, self.pos)

    def scan_number(self) -> None:
        text, i = self.text, self.pos
        start = i
        if text[i] == "0" and i + 1 < self.n and text[i + 1] in "xXbBoO":
            i += 2
            while i < self.n and (text[i].isalnum() or text[i] == "_"):
                i += 1
        else:
            while i < self.n and (text[i].isdigit() or text[i] == "_"):
                i += 1
            if i < self.n and text[i] == ".":
                i += 1
                while i < self.n and (text[i].isdigit() or text[i] == "_"):
                    i += 1
            if i < self.n and text[i] in "eE":
                j = i + 1
                if j < self.n and text[j] in "+-":
                    j += 1
                if j < self.n and text[j].isdigit():
                    i = j
                    while i < self.n and text[i].isdigit():
                        i += 1
            while i < self.n and text[i] in "fFlLuUjJ":
                i += 1
        self.pos = i
        self.emit(self.number_kind, start, i)

    def scan_quoted(self, quote: str, kind: str) -> None:
        """Single-line quoted literal with backslash escapes."""
        text, start = self.text, self.pos
        i = start + len(quote)
        while i < self.n:
            ch = text[i]
            if ch == "\\" and i + 1 < self.n:
                i += 2
                continue
            if text.startswith(quote, i):
                i += len(quote)
                self.pos = i
                self.emit(kind, start, i)
                return
            if ch == "\n" and len(quote) == 1:
                break
            i += 1
        self.pos = i
        self.emit(kind, start, i, error=True)

    def scan_word(self) -> None:
        text, start = self.text, self.pos
        i = start
        while i < self.n and (text[i].isalnum() or text[i] == "_"):
            i += 1
        word = text[start:i]
        self.pos = i
        if word in self.keyword_kinds:
            self.emit(self.keyword_kinds[word], start, i)
        elif word in self.keywords:
            self.emit(word, start, i)
        else:
            self.emit("identifier", start, i)

    def scan_operator(self) -> bool:
        for op in self.operators:
            if self.at(op):
                self.emit(op, self.pos, self.pos + len(op))
                self.pos += len(op)
                return True
        return False
