"""Java grammar bundle.

Shares the C-family statement/expression machinery; adds class and
method declarations and Java kind names.
"""

from __future__ import annotations

from .c_family import CFamilyLexer, CFamilyParser
from .lexer import RawNode, leaf

JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while var""".split()
)

JAVA_PRIMITIVES = frozenset(
    ["int", "char", "void", "float", "double", "long", "short", "boolean", "byte", "var"]
)

JAVA_LITERALS = frozenset(
    [
        "decimal_integer_literal",
        "decimal_floating_point_literal",
        "string_literal",
        "character_literal",
        "true",
        "false",
        "null_literal",
    ]
)

MODIFIERS = ("public", "private", "protected", "static", "final", "abstract", "synchronized")


class JavaLexer(CFamilyLexer):
    keywords = JAVA_KEYWORDS
    keyword_kinds = {"true": "true", "false": "false", "null": "null_literal"}
    number_kind = "decimal_integer_literal"
    string_kind = "string_literal"
    char_kind = "character_literal"

    def scan_number(self) -> None:
        super().scan_number()
        tok = self.tokens.pop()
        text = self.text[tok.start : tok.end]
        kind = self.number_kind
        if "." in text or (("e" in text or "E" in text) and not text.startswith("0x")):
            kind = "decimal_floating_point_literal"
        self.emit(kind, tok.start, tok.end)


class JavaParser(CFamilyParser):
    root_kind = "program"
    block_kind = "block"
    declaration_kind = "local_variable_declaration"
    call_kind = "method_invocation"
    field_kind = "field_access"
    subscript_kind = "array_access"
    primitive_types = JAVA_PRIMITIVES
    literal_kinds = JAVA_LITERALS

    def parse_toplevel(self) -> RawNode:
        if self.kind() in MODIFIERS or self.kind() == "class":
            return self.parse_class_or_member(toplevel=True)
        if self.kind() == "import":
            node = self.node("import_declaration")
            while self.kind() not in (";", "@eof"):
                node.add(leaf(self.advance()))
            node.add(self.expect(";"))
            return node
        if self.is_function_definition():
            return self.parse_method_declaration(self.parse_modifiers())
        return self.parse_statement()

    def parse_modifiers(self) -> RawNode | None:
        if self.kind() not in MODIFIERS:
            return None
        mods = self.node("modifiers")
        while self.kind() in MODIFIERS:
            mods.add(leaf(self.advance()))
        return mods

    def parse_class_or_member(self, toplevel: bool = False) -> RawNode:
        mods = self.parse_modifiers()
        if self.kind() == "class":
            node = self.node("class_declaration")
            if mods is not None:
                node.add(mods)
            node.add(leaf(self.advance()))
            node.add(self.expect("identifier"), "name")
            body = self.node("class_body")
            body.add(self.expect("{"))
            while self.kind() not in ("}", "@eof"):
                before = self.pos
                body.add(self.parse_class_or_member())
                if self.pos == before:
                    body.add(self.error_advance())
            body.add(self.expect("}"))
            node.add(body, "body")
            return node
        if self.is_function_definition():
            return self.parse_method_declaration(mods)
        if self.is_type_start():
            decl = self.parse_declaration()
            if mods is not None:
                decl.children.insert(0, ("child", mods))
                decl.start = min(decl.start, mods.start)
            return decl
        return self.parse_statement()

    def parse_method_declaration(self, mods: RawNode | None) -> RawNode:
        node = self.node("method_declaration")
        if mods is not None:
            node.add(mods)
        node.add(self.parse_type(), "type")
        node.add(self.expect("identifier"), "name")
        node.add(self.parse_parameter_list(), "parameters")
        if self.kind() == "{":
            node.add(self.parse_block(), "body")
        else:
            node.add(self.expect(";"))
        return node

    def parse_unary(self) -> RawNode:
        if self.kind() == "new":
            node = self.node("object_creation_expression")
            node.add(leaf(self.advance()))
            node.add(self.parse_type(), "type")
            if self.kind() == "(":
                node.add(self.parse_argument_list(), "arguments")
            return node
        if self.kind() in ("*", "&"):
            # not prefix operators in Java
            return self.parse_postfix()
        return super().parse_unary()


def parse(text: str) -> RawNode:
    return JavaParser(JavaLexer(text).run(), text).parse()


def lex(text: str):
    return JavaLexer(text).run()
