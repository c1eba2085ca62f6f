"""C grammar bundle."""

from __future__ import annotations

from .c_family import CFamilyLexer, CFamilyParser
from .lexer import RawNode

C_KEYWORDS = frozenset(
    """auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    bool""".split()
)

C_PRIMITIVES = frozenset(
    ["int", "char", "void", "float", "double", "long", "short", "unsigned", "signed", "bool"]
)

C_LITERALS = frozenset(["number_literal", "string_literal", "char_literal", "true", "false", "null"])


class CLexer(CFamilyLexer):
    keywords = C_KEYWORDS
    keyword_kinds = {"true": "true", "false": "false", "NULL": "null"}


class CParser(CFamilyParser):
    root_kind = "translation_unit"
    block_kind = "compound_statement"
    declaration_kind = "declaration"
    call_kind = "call_expression"
    field_kind = "field_expression"
    subscript_kind = "subscript_expression"
    primitive_types = C_PRIMITIVES
    literal_kinds = C_LITERALS


def parse(text: str) -> RawNode:
    return CParser(CLexer(text).run(), text).parse()


def lex(text: str):
    return CLexer(text).run()
