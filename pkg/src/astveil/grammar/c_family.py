"""Recursive-descent parser shared by the C and Java grammar bundles.

Produces full concrete-syntax trees: every lexical token is a leaf whose
kind is the token text (operators, keywords, punctuation) or a literal
kind. Malformed input never raises; it yields ERROR nodes and
zero-width "missing" leaves, mirroring error-tolerant parser behavior.
"""

from __future__ import annotations

from .lexer import LexerBase, RawNode, Token, leaf, missing_leaf

# binary precedence, low to high; assignment and ternary handled separately
BINARY_LEVELS = [
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">="),
    ("<<", ">>"),
    ("+", "-"),
    ("*", "/", "%"),
]

ASSIGN_OPS = ("=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=")

C_OPERATORS = (
    "<<=", ">>=", "...",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "~", "&", "|", "^",
    "?", ":", ";", ",", ".", "(", ")", "[", "]", "{", "}",
)


class CFamilyLexer(LexerBase):
    operators = C_OPERATORS

    def run(self) -> list[Token]:
        text = self.text
        while self.pos < self.n:
            ch = text[self.pos]
            if ch in " \t\r\n":
                self.pos += 1
                continue
            if self.at("//"):
                while self.pos < self.n and text[self.pos] != "\n":
                    self.pos += 1
                continue
            if self.at("/*"):
                end = text.find("*/", self.pos + 2)
                self.pos = self.n if end < 0 else end + 2
                continue
            if ch == "#":
                # preprocessor line, single token
                start = self.pos
                while self.pos < self.n and text[self.pos] != "\n":
                    if text[self.pos] == "\\" and self.pos + 1 < self.n:
                        self.pos += 1
                    self.pos += 1
                self.emit("preproc", start, self.pos)
                continue
            if ch.isdigit() or (ch == "." and self.pos + 1 < self.n and text[self.pos + 1].isdigit()):
                self.scan_number()
                continue
            if ch == '"':
                self.scan_quoted('"', self.string_kind)
                continue
            if ch == "'":
                self.scan_quoted("'", self.char_kind)
                continue
            if ch.isalpha() or ch == "_":
                self.scan_word()
                continue
            if self.scan_operator():
                continue
            self.emit(ch, self.pos, self.pos + 1, error=True)
            self.pos += 1
        self.emit("@eof", self.n, self.n)
        return self.tokens


class CFamilyParser:
    """Statement/expression parser; language bundles override naming hooks."""

    root_kind = "translation_unit"
    block_kind = "compound_statement"
    declaration_kind = "declaration"
    call_kind = "call_expression"
    field_kind = "field_expression"
    subscript_kind = "subscript_expression"
    primitive_types = frozenset()
    literal_kinds = frozenset()

    def __init__(self, tokens: list[Token], text: str):
        self.tokens = tokens
        self.text = text
        self.pos = 0

    # --- token helpers -------------------------------------------------
    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def kind(self, ahead: int = 0) -> str:
        return self.peek(ahead).kind

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if self.pos < len(self.tokens) - 1:
            self.pos += 1
        return tok

    def expect(self, kind: str) -> RawNode:
        if self.kind() == kind:
            return leaf(self.advance())
        anchor = self.tokens[self.pos - 1].end if self.pos > 0 else self.peek().start
        return missing_leaf(kind, anchor)

    def at_eof(self) -> bool:
        return self.kind() == "@eof"

    def node(self, kind: str) -> RawNode:
        pos = self.peek().start
        return RawNode(kind, pos, pos)

    # --- entry ----------------------------------------------------------
    def parse(self) -> RawNode:
        root = RawNode(self.root_kind, 0, len(self.text))
        while not self.at_eof():
            before = self.pos
            root.children.append(("child", self.parse_toplevel()))
            if self.pos == before:
                root.children.append(("child", self.error_advance()))
        return root

    def error_advance(self) -> RawNode:
        tok = self.advance()
        node = leaf(tok)
        wrapper = RawNode("ERROR", tok.start, tok.end, error=True)
        wrapper.add(node)
        return wrapper

    def parse_toplevel(self) -> RawNode:
        if self.kind() == "preproc":
            tok = self.advance()
            return RawNode("preproc_include", tok.start, tok.end)
        if self.is_function_definition():
            return self.parse_function_definition()
        return self.parse_statement()

    # --- declarations ----------------------------------------------------
    def is_type_start(self) -> bool:
        k = self.kind()
        if k in self.primitive_types:
            return True
        return k == "identifier" and self.kind(1) in ("identifier", "*") and self.kind(2) != "("

    def is_function_definition(self) -> bool:
        if self.kind() not in self.primitive_types and self.kind() != "identifier":
            return False
        i = 0
        if self.kind(i) in self.primitive_types or self.kind(i) == "identifier":
            i += 1
        while self.kind(i) == "*":
            i += 1
        return self.kind(i) == "identifier" and self.kind(i + 1) == "("

    def parse_type(self) -> RawNode:
        if self.kind() in self.primitive_types:
            return leaf(self.advance())
        if self.kind() == "identifier":
            tok = self.advance()
            return RawNode("type_identifier", tok.start, tok.end)
        return missing_leaf("type_identifier", self.peek().start)

    def parse_function_definition(self) -> RawNode:
        node = self.node("function_definition")
        node.add(self.parse_type(), "type")
        decl = self.node("function_declarator")
        while self.kind() == "*":
            decl.add(leaf(self.advance()))
        decl.add(self.expect("identifier"), "declarator")
        decl.add(self.parse_parameter_list(), "parameters")
        node.add(decl, "declarator")
        if self.kind() == "{":
            node.add(self.parse_block(), "body")
        else:
            node.add(self.expect(";"))
        return node

    def parse_parameter_list(self) -> RawNode:
        params = self.node("parameter_list")
        params.add(self.expect("("))
        while self.kind() not in (")", "@eof", "{", ";"):
            before = self.pos
            param = self.node("parameter_declaration")
            param.add(self.parse_type(), "type")
            while self.kind() == "*":
                param.add(leaf(self.advance()))
            if self.kind() == "identifier":
                param.add(leaf(self.advance()), "declarator")
            params.add(param)
            if self.kind() == ",":
                params.add(leaf(self.advance()))
            if self.pos == before:
                params.add(self.error_advance())
        params.add(self.expect(")"))
        return params

    def parse_declaration(self) -> RawNode:
        node = self.node(self.declaration_kind)
        node.add(self.parse_type(), "type")
        while True:
            while self.kind() == "*":
                node.add(leaf(self.advance()))
            name = self.expect("identifier")
            if self.kind() == "=":
                decl = RawNode("init_declarator", name.start, name.end)
                decl.add(name, "declarator")
                decl.add(leaf(self.advance()))
                decl.add(self.parse_expression(assign=False), "value")
                node.add(decl, "declarator")
            else:
                node.add(name, "declarator")
            if self.kind() == ",":
                node.add(leaf(self.advance()))
                continue
            break
        node.add(self.expect(";"))
        return node

    # --- statements ------------------------------------------------------
    def parse_statement(self) -> RawNode:
        k = self.kind()
        if k == "{":
            return self.parse_block()
        if k == "if":
            return self.parse_if()
        if k == "while":
            return self.parse_while()
        if k == "do":
            return self.parse_do()
        if k == "for":
            return self.parse_for()
        if k == "return":
            return self.parse_return()
        if k in ("break", "continue"):
            node = self.node(f"{k}_statement")
            node.add(leaf(self.advance()))
            node.add(self.expect(";"))
            return node
        if k == "preproc":
            tok = self.advance()
            return RawNode("preproc_include", tok.start, tok.end)
        if k == ";":
            node = self.node("expression_statement")
            node.add(leaf(self.advance()))
            return node
        if self.is_type_start():
            return self.parse_declaration()
        if k in ("}", ")", "]"):
            return self.error_advance()
        return self.parse_expression_statement()

    def parse_block(self) -> RawNode:
        node = self.node(self.block_kind)
        node.add(self.expect("{"))
        while self.kind() not in ("}", "@eof"):
            before = self.pos
            node.add(self.parse_statement())
            if self.pos == before:
                node.add(self.error_advance())
        node.add(self.expect("}"))
        return node

    def parse_paren_condition(self, node: RawNode) -> None:
        node.add(self.expect("("))
        node.add(self.parse_expression(), "condition")
        node.add(self.expect(")"))

    def parse_if(self) -> RawNode:
        node = self.node("if_statement")
        node.add(leaf(self.advance()))
        self.parse_paren_condition(node)
        node.add(self.parse_statement(), "consequence")
        if self.kind() == "else":
            clause = self.node("else_clause")
            clause.add(leaf(self.advance()))
            clause.add(self.parse_statement(), "body")
            node.add(clause, "alternative")
        return node

    def parse_while(self) -> RawNode:
        node = self.node("while_statement")
        node.add(leaf(self.advance()))
        self.parse_paren_condition(node)
        node.add(self.parse_statement(), "body")
        return node

    def parse_do(self) -> RawNode:
        node = self.node("do_statement")
        node.add(leaf(self.advance()))
        node.add(self.parse_statement(), "body")
        node.add(self.expect("while"))
        self.parse_paren_condition(node)
        node.add(self.expect(";"))
        return node

    def parse_for(self) -> RawNode:
        node = self.node("for_statement")
        node.add(leaf(self.advance()))
        node.add(self.expect("("))
        if self.kind() == ";":
            node.add(leaf(self.advance()))
        elif self.is_type_start():
            node.add(self.parse_declaration(), "initializer")
        else:
            node.add(self.parse_expression(), "initializer")
            node.add(self.expect(";"))
        if self.kind() != ";":
            node.add(self.parse_expression(), "condition")
        node.add(self.expect(";"))
        if self.kind() != ")":
            node.add(self.parse_expression(), "update")
        node.add(self.expect(")"))
        node.add(self.parse_statement(), "body")
        return node

    def parse_return(self) -> RawNode:
        node = self.node("return_statement")
        node.add(leaf(self.advance()))
        if self.kind() != ";":
            node.add(self.parse_expression())
        node.add(self.expect(";"))
        return node

    def parse_expression_statement(self) -> RawNode:
        node = self.node("expression_statement")
        node.add(self.parse_expression())
        node.add(self.expect(";"))
        return node

    # --- expressions -------------------------------------------------------
    def parse_expression(self, assign: bool = True) -> RawNode:
        return self.parse_assignment() if assign else self.parse_ternary()

    def parse_assignment(self) -> RawNode:
        left = self.parse_ternary()
        if self.kind() in ASSIGN_OPS:
            node = RawNode("assignment_expression", left.start, left.end)
            node.add(left, "left")
            node.add(leaf(self.advance()), "operator")
            node.add(self.parse_assignment(), "right")
            return node
        return left

    def parse_ternary(self) -> RawNode:
        cond = self.parse_binary(0)
        if self.kind() == "?":
            node = RawNode("conditional_expression", cond.start, cond.end)
            node.add(cond, "condition")
            node.add(leaf(self.advance()))
            node.add(self.parse_expression(assign=False), "consequence")
            node.add(self.expect(":"))
            node.add(self.parse_expression(assign=False), "alternative")
            return node
        return cond

    def parse_binary(self, level: int) -> RawNode:
        if level >= len(BINARY_LEVELS):
            return self.parse_unary()
        left = self.parse_binary(level + 1)
        while self.kind() in BINARY_LEVELS[level]:
            node = RawNode("binary_expression", left.start, left.end)
            node.add(left, "left")
            node.add(leaf(self.advance()), "operator")
            node.add(self.parse_binary(level + 1), "right")
            left = node
        return left

    def parse_unary(self) -> RawNode:
        k = self.kind()
        if k in ("!", "~", "-", "+"):
            node = self.node("unary_expression")
            node.add(leaf(self.advance()), "operator")
            node.add(self.parse_unary(), "argument")
            return node
        if k in ("*", "&"):
            node = self.node("pointer_expression")
            node.add(leaf(self.advance()), "operator")
            node.add(self.parse_unary(), "argument")
            return node
        if k in ("++", "--"):
            node = self.node("update_expression")
            node.add(leaf(self.advance()), "operator")
            node.add(self.parse_unary(), "argument")
            return node
        return self.parse_postfix()

    def parse_postfix(self) -> RawNode:
        expr = self.parse_primary()
        while True:
            k = self.kind()
            if k == "(":
                node = RawNode(self.call_kind, expr.start, expr.end)
                node.add(expr, "function")
                node.add(self.parse_argument_list(), "arguments")
                expr = node
            elif k == "[":
                node = RawNode(self.subscript_kind, expr.start, expr.end)
                node.add(expr, "argument")
                node.add(leaf(self.advance()))
                node.add(self.parse_expression(), "index")
                node.add(self.expect("]"))
                expr = node
            elif k in (".", "->"):
                node = RawNode(self.field_kind, expr.start, expr.end)
                node.add(expr, "argument")
                node.add(leaf(self.advance()))
                node.add(self.expect("identifier"), "field")
                expr = node
            elif k in ("++", "--"):
                node = RawNode("update_expression", expr.start, expr.end)
                node.add(expr, "argument")
                node.add(leaf(self.advance()), "operator")
                expr = node
            else:
                return expr

    def parse_argument_list(self) -> RawNode:
        node = self.node("argument_list")
        node.add(self.expect("("))
        while self.kind() not in (")", ";", "@eof"):
            before = self.pos
            node.add(self.parse_expression())
            if self.kind() == ",":
                node.add(leaf(self.advance()))
            if self.pos == before:
                node.add(self.error_advance())
        node.add(self.expect(")"))
        return node

    def parse_primary(self) -> RawNode:
        k = self.kind()
        if k in self.literal_kinds or k == "identifier":
            return leaf(self.advance())
        if k == "(":
            node = self.node("parenthesized_expression")
            node.add(leaf(self.advance()))
            node.add(self.parse_expression())
            node.add(self.expect(")"))
            return node
        if k in (")", "]", "}", ";", ",", "@eof"):
            return missing_leaf("identifier", self.peek().start)
        return self.error_advance()
