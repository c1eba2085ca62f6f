"""Python grammar bundle.

Indentation-aware lexer emitting synthetic @newline/@indent/@dedent
tokens, plus a recursive-descent parser covering the statement and
expression forms common in code corpora. Unknown or malformed
constructs become ERROR nodes; an absent suite becomes a zero-width
missing block so empty bodies register as parse errors.
"""

from __future__ import annotations

from .lexer import LexerBase, RawNode, Token, leaf, missing_leaf

PY_KEYWORDS = frozenset(
    """False None True and as assert async await break class continue def del
    elif else except finally for from global if import in is lambda nonlocal
    not or pass raise return try while with yield""".split()
)

PY_OPERATORS = (
    "**=", "//=", "<<=", ">>=", "...",
    "==", "!=", "<=", ">=", "->", ":=", "**", "//", "<<", ">>",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=",
    "+", "-", "*", "/", "%", "@", "<", ">", "=", "&", "|", "^", "~",
    "(", ")", "[", "]", "{", "}", ",", ":", ";", ".",
)

AUG_OPS = ("+=", "-=", "*=", "/=", "%=", "//=", "**=", "&=", "|=", "^=", ">>=", "<<=", "@=")

COMPARE_OPS = ("<", ">", "==", "!=", "<=", ">=")

BIN_LEVELS = [
    ("|",),
    ("^",),
    ("&",),
    ("<<", ">>"),
    ("+", "-"),
    ("*", "/", "//", "%", "@"),
]

STRING_PREFIXES = ("rb", "br", "Rb", "rB", "fr", "rf", "r", "b", "f", "u", "R", "B", "F", "U")


class PythonLexer(LexerBase):
    keywords = PY_KEYWORDS
    operators = PY_OPERATORS
    number_kind = "number"
    keyword_kinds = {"True": "true", "False": "false", "None": "none"}

    def run(self) -> list[Token]:
        text = self.text
        indents = [0]
        depth = 0  # bracket nesting
        line_start = True

        while self.pos < self.n:
            if line_start and depth == 0:
                # measure indentation; skip blank/comment-only lines
                col = 0
                i = self.pos
                while i < self.n and text[i] in " \t":
                    col = col + 1 if text[i] == " " else (col // 8 + 1) * 8
                    i += 1
                if i >= self.n or text[i] == "\n" or text[i] == "#":
                    while i < self.n and text[i] != "\n":
                        i += 1
                    self.pos = i + 1 if i < self.n else i
                    continue
                if col > indents[-1]:
                    indents.append(col)
                    self.emit("@indent", self.pos, i)
                while col < indents[-1]:
                    indents.pop()
                    self.emit("@dedent", i, i)
                self.pos = i
                line_start = False
                continue

            ch = text[self.pos]
            if ch == "\n":
                self.pos += 1
                if depth == 0:
                    self.emit("@newline", self.pos - 1, self.pos)
                    line_start = True
                continue
            if ch in " \t\r":
                self.pos += 1
                continue
            if ch == "\\" and self.pos + 1 < self.n and text[self.pos + 1] == "\n":
                self.pos += 2
                continue
            if ch == "#":
                while self.pos < self.n and text[self.pos] != "\n":
                    self.pos += 1
                continue
            if ch in "([{":
                depth += 1
                self.emit(ch, self.pos, self.pos + 1)
                self.pos += 1
                continue
            if ch in ")]}":
                depth = max(0, depth - 1)
                self.emit(ch, self.pos, self.pos + 1)
                self.pos += 1
                continue
            if self.scan_string():
                continue
            if ch.isdigit() or (ch == "." and self.pos + 1 < self.n and text[self.pos + 1].isdigit()):
                self.scan_number()
                continue
            if ch.isalpha() or ch == "_":
                self.scan_word()
                continue
            if self.scan_operator():
                continue
            self.emit(ch, self.pos, self.pos + 1, error=True)
            self.pos += 1
        if self.tokens and self.tokens[-1].kind not in ("@newline", "@dedent"):
            self.emit("@newline", self.n, self.n)
        while len(indents) > 1:
            indents.pop()
            self.emit("@dedent", self.n, self.n)
        self.emit("@eof", self.n, self.n)
        return self.tokens

    def scan_string(self) -> bool:
        text, i = self.text, self.pos
        j = i
        for prefix in STRING_PREFIXES:
            if text.startswith(prefix, i) and i + len(prefix) < self.n and text[i + len(prefix)] in "'\"":
                j = i + len(prefix)
                break
        if j >= self.n or text[j] not in "'\"":
            return False
        quote = text[j]
        triple = text.startswith(quote * 3, j)
        q = quote * 3 if triple else quote
        k = j + len(q)
        while k < self.n:
            if text[k] == "\\" and k + 1 < self.n:
                k += 2
                continue
            if text.startswith(q, k):
                self.emit("string", i, k + len(q))
                self.pos = k + len(q)
                return True
            if text[k] == "\n" and not triple:
                break
            k += 1
        self.emit("string", i, k, error=True)
        self.pos = k
        return True


class PythonParser:
    def __init__(self, tokens: list[Token], text: str):
        self.tokens = tokens
        self.text = text
        self.pos = 0

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

    def eat_newline(self) -> None:
        if self.kind() == "@newline":
            self.advance()

    def at_eof(self) -> bool:
        return self.kind() == "@eof"

    def node(self, kind: str) -> RawNode:
        pos = self.peek().start
        return RawNode(kind, pos, pos)

    def error_advance(self) -> RawNode:
        wrapper = self.node("ERROR")
        wrapper.error = True
        tok = self.advance()
        if not tok.synthetic:
            wrapper.add(leaf(tok))
        else:
            wrapper.end = tok.end
        return wrapper

    def parse(self) -> RawNode:
        root = RawNode("module", 0, len(self.text))
        while not self.at_eof():
            before = self.pos
            for stmt in self.parse_statement_line():
                root.children.append(("child", stmt))
            if self.pos == before:
                root.children.append(("child", self.error_advance()))
        return root

    # --- statements ------------------------------------------------------
    def parse_statement_line(self) -> list[RawNode]:
        k = self.kind()
        if k in ("@newline", "@indent", "@dedent"):
            self.advance()
            return []
        if k in ("if", "while", "for", "def", "class", "try", "with"):
            return [self.parse_compound(k)]
        stmts = [self.parse_simple_statement()]
        while self.kind() == ";":
            stmts[-1].add(leaf(self.advance()))
            if self.kind() in ("@newline", "@eof"):
                break
            stmts.append(self.parse_simple_statement())
        self.eat_newline()
        return stmts

    def parse_compound(self, k: str) -> RawNode:
        if k == "if":
            return self.parse_if()
        if k == "while":
            node = self.node("while_statement")
            node.add(leaf(self.advance()))
            node.add(self.parse_expression(), "condition")
            node.add(self.expect(":"))
            node.add(self.parse_block(), "body")
            return node
        if k == "for":
            node = self.node("for_statement")
            node.add(leaf(self.advance()))
            node.add(self.parse_target_list(), "left")
            node.add(self.expect("in"))
            node.add(self.parse_expression_list(), "right")
            node.add(self.expect(":"))
            node.add(self.parse_block(), "body")
            return node
        if k == "def":
            return self.parse_def()
        if k == "class":
            return self.parse_class()
        if k == "try":
            return self.parse_try()
        return self.parse_with()

    def parse_if(self) -> RawNode:
        node = self.node("if_statement")
        node.add(leaf(self.advance()))
        node.add(self.parse_expression(), "condition")
        node.add(self.expect(":"))
        node.add(self.parse_block(), "consequence")
        while self.kind() == "elif":
            clause = self.node("elif_clause")
            clause.add(leaf(self.advance()))
            clause.add(self.parse_expression(), "condition")
            clause.add(self.expect(":"))
            clause.add(self.parse_block(), "consequence")
            node.add(clause, "alternative")
        if self.kind() == "else":
            node.add(self.parse_else(), "alternative")
        return node

    def parse_else(self) -> RawNode:
        clause = self.node("else_clause")
        clause.add(leaf(self.advance()))
        clause.add(self.expect(":"))
        clause.add(self.parse_block(), "body")
        return clause

    def parse_def(self) -> RawNode:
        node = self.node("function_definition")
        node.add(leaf(self.advance()))
        node.add(self.expect("identifier"), "name")
        params = self.node("parameters")
        params.add(self.expect("("))
        while self.kind() not in (")", "@newline", "@eof", ":"):
            before = self.pos
            if self.kind() in ("*", "**"):
                params.add(leaf(self.advance()))
            if self.kind() == "identifier":
                name = leaf(self.advance())
                if self.kind() == "=":
                    dflt = RawNode("default_parameter", name.start, name.end)
                    dflt.add(name, "name")
                    dflt.add(leaf(self.advance()))
                    dflt.add(self.parse_expression(), "value")
                    params.add(dflt)
                else:
                    params.add(name)
            if self.kind() == ",":
                params.add(leaf(self.advance()))
            if self.pos == before:
                params.add(self.error_advance())
        params.add(self.expect(")"))
        node.add(params, "parameters")
        if self.kind() == "->":
            node.add(leaf(self.advance()))
            node.add(self.parse_expression(), "return_type")
        node.add(self.expect(":"))
        node.add(self.parse_block(), "body")
        return node

    def parse_class(self) -> RawNode:
        node = self.node("class_definition")
        node.add(leaf(self.advance()))
        node.add(self.expect("identifier"), "name")
        if self.kind() == "(":
            args = self.node("argument_list")
            args.add(leaf(self.advance()))
            while self.kind() not in (")", "@newline", "@eof", ":"):
                before = self.pos
                args.add(self.parse_expression())
                if self.kind() == ",":
                    args.add(leaf(self.advance()))
                if self.pos == before:
                    args.add(self.error_advance())
            args.add(self.expect(")"))
            node.add(args, "superclasses")
        node.add(self.expect(":"))
        node.add(self.parse_block(), "body")
        return node

    def parse_try(self) -> RawNode:
        node = self.node("try_statement")
        node.add(leaf(self.advance()))
        node.add(self.expect(":"))
        node.add(self.parse_block(), "body")
        while self.kind() == "except":
            clause = self.node("except_clause")
            clause.add(leaf(self.advance()))
            if self.kind() not in (":", "@newline", "@eof"):
                clause.add(self.parse_expression())
                if self.kind() == "as":
                    clause.add(leaf(self.advance()))
                    clause.add(self.expect("identifier"))
            clause.add(self.expect(":"))
            clause.add(self.parse_block(), "body")
            node.add(clause)
        if self.kind() == "else":
            node.add(self.parse_else())
        if self.kind() == "finally":
            clause = self.node("finally_clause")
            clause.add(leaf(self.advance()))
            clause.add(self.expect(":"))
            clause.add(self.parse_block(), "body")
            node.add(clause)
        return node

    def parse_with(self) -> RawNode:
        node = self.node("with_statement")
        node.add(leaf(self.advance()))
        while True:
            item = self.node("with_item")
            item.add(self.parse_expression(), "value")
            if self.kind() == "as":
                item.add(leaf(self.advance()))
                item.add(self.parse_primary_chain(), "alias")
            node.add(item)
            if self.kind() == ",":
                node.add(leaf(self.advance()))
                continue
            break
        node.add(self.expect(":"))
        node.add(self.parse_block(), "body")
        return node

    def parse_block(self) -> RawNode:
        if self.kind() == "@newline":
            nl = self.advance()
            if self.kind() == "@indent":
                self.advance()
                block = self.node("block")
                while self.kind() not in ("@dedent", "@eof"):
                    before = self.pos
                    for stmt in self.parse_statement_line():
                        block.add(stmt)
                    if self.pos == before:
                        block.add(self.error_advance())
                if self.kind() == "@dedent":
                    self.advance()
                if not block.children:
                    block.missing = True
                return block
            block = RawNode("block", nl.start, nl.start, missing=True)
            return block
        if self.kind() in ("@eof", "@dedent"):
            return RawNode("block", self.peek().start, self.peek().start, missing=True)
        # inline suite on the same line
        block = self.node("block")
        for stmt in self.parse_statement_line():
            block.add(stmt)
        if not block.children:
            block.missing = True
        return block

    def parse_simple_statement(self) -> RawNode:
        k = self.kind()
        if k == "return":
            node = self.node("return_statement")
            node.add(leaf(self.advance()))
            if self.kind() not in ("@newline", "@eof", ";", "@dedent"):
                node.add(self.parse_expression_list())
            return node
        if k in ("pass", "break", "continue"):
            node = self.node(f"{k}_statement")
            node.add(leaf(self.advance()))
            return node
        if k in ("global", "nonlocal"):
            node = self.node(f"{k}_statement")
            node.add(leaf(self.advance()))
            node.add(self.expect("identifier"))
            while self.kind() == ",":
                node.add(leaf(self.advance()))
                node.add(self.expect("identifier"))
            return node
        if k == "import":
            node = self.node("import_statement")
            self.consume_to_eol(node)
            return node
        if k == "from":
            node = self.node("import_from_statement")
            self.consume_to_eol(node)
            return node
        if k == "assert":
            node = self.node("assert_statement")
            node.add(leaf(self.advance()))
            node.add(self.parse_expression())
            if self.kind() == ",":
                node.add(leaf(self.advance()))
                node.add(self.parse_expression())
            return node
        if k == "raise":
            node = self.node("raise_statement")
            node.add(leaf(self.advance()))
            if self.kind() not in ("@newline", "@eof", ";", "@dedent"):
                node.add(self.parse_expression())
            return node
        if k == "del":
            node = self.node("delete_statement")
            node.add(leaf(self.advance()))
            node.add(self.parse_expression_list())
            return node
        return self.parse_expression_statement()

    def consume_to_eol(self, node: RawNode) -> None:
        while self.kind() not in ("@newline", "@eof", ";", "@dedent"):
            tok = self.advance()
            node.add(leaf(tok))

    def parse_expression_statement(self) -> RawNode:
        node = self.node("expression_statement")
        expr = self.parse_expression_list()
        if self.kind() == "=":
            node.add(self.parse_assignment_chain(expr), "child")
            return node
        if self.kind() in AUG_OPS:
            aug = RawNode("augmented_assignment", expr.start, expr.end)
            aug.add(expr, "left")
            aug.add(leaf(self.advance()), "operator")
            aug.add(self.parse_expression_list(), "right")
            node.add(aug)
            return node
        node.add(expr)
        return node

    def parse_assignment_chain(self, left: RawNode) -> RawNode:
        node = RawNode("assignment", left.start, left.end)
        node.add(left, "left")
        node.add(leaf(self.advance()))
        right = self.parse_expression_list()
        if self.kind() == "=":
            right = self.parse_assignment_chain(right)
        node.add(right, "right")
        return node

    def parse_target_list(self) -> RawNode:
        return self.parse_expression_list(targets=True)

    def parse_expression_list(self, targets: bool = False) -> RawNode:
        first = self.parse_expression() if not targets else self.parse_primary_chain()
        if self.kind() != ",":
            return first
        node = RawNode("expression_list", first.start, first.end)
        node.add(first)
        while self.kind() == ",":
            node.add(leaf(self.advance()))
            if self.kind() in ("@newline", "@eof", "=", ":", ")", "]", "}", "in", ";"):
                break
            node.add(self.parse_expression() if not targets else self.parse_primary_chain())
        return node

    # --- expressions ------------------------------------------------------
    def parse_expression(self) -> RawNode:
        expr = self.parse_ternary()
        return expr

    def parse_ternary(self) -> RawNode:
        if self.kind() == "lambda":
            node = self.node("lambda")
            node.add(leaf(self.advance()))
            while self.kind() not in (":", "@newline", "@eof"):
                node.add(leaf(self.advance()) if self.kind() in ("identifier", ",") else self.error_advance())
            node.add(self.expect(":"))
            node.add(self.parse_expression(), "body")
            return node
        expr = self.parse_or()
        if self.kind() == "if":
            node = RawNode("conditional_expression", expr.start, expr.end)
            node.add(expr)
            node.add(leaf(self.advance()))
            node.add(self.parse_or())
            node.add(self.expect("else"))
            node.add(self.parse_expression())
            return node
        return expr

    def parse_or(self) -> RawNode:
        left = self.parse_and()
        while self.kind() == "or":
            node = RawNode("boolean_operator", left.start, left.end)
            node.add(left, "left")
            node.add(leaf(self.advance()), "operator")
            node.add(self.parse_and(), "right")
            left = node
        return left

    def parse_and(self) -> RawNode:
        left = self.parse_not()
        while self.kind() == "and":
            node = RawNode("boolean_operator", left.start, left.end)
            node.add(left, "left")
            node.add(leaf(self.advance()), "operator")
            node.add(self.parse_not(), "right")
            left = node
        return left

    def parse_not(self) -> RawNode:
        if self.kind() == "not":
            node = self.node("not_operator")
            node.add(leaf(self.advance()), "operator")
            node.add(self.parse_not(), "argument")
            return node
        return self.parse_comparison()

    def at_comparison_op(self) -> tuple[str, ...] | None:
        k = self.kind()
        if k in COMPARE_OPS:
            return (k,)
        if k == "in":
            return ("in",)
        if k == "not" and self.kind(1) == "in":
            return ("not", "in")
        if k == "is" and self.kind(1) == "not":
            return ("is", "not")
        if k == "is":
            return ("is",)
        return None

    def parse_comparison(self) -> RawNode:
        left = self.parse_binary(0)
        ops = self.at_comparison_op()
        if ops is None:
            return left
        parts: list[tuple[str, RawNode]] = [("left", left)]
        while ops is not None:
            for _ in ops:
                parts.append(("operator", leaf(self.advance())))
            parts.append(("right", self.parse_binary(0)))
            ops = self.at_comparison_op()
        operand_count = sum(1 for lbl, _ in parts if lbl in ("left", "right"))
        if operand_count > 2:
            parts = [("child" if lbl in ("left", "right") else lbl, n) for lbl, n in parts]
        node = RawNode("comparison_operator", left.start, left.end)
        for lbl, child in parts:
            node.add(child, lbl)
        return node

    def parse_binary(self, level: int) -> RawNode:
        if level >= len(BIN_LEVELS):
            return self.parse_unary()
        left = self.parse_binary(level + 1)
        while self.kind() in BIN_LEVELS[level]:
            node = RawNode("binary_operator", left.start, left.end)
            node.add(left, "left")
            node.add(leaf(self.advance()), "operator")
            node.add(self.parse_binary(level + 1), "right")
            left = node
        return left

    def parse_unary(self) -> RawNode:
        if self.kind() in ("-", "+", "~"):
            node = self.node("unary_operator")
            node.add(leaf(self.advance()), "operator")
            node.add(self.parse_unary(), "argument")
            return node
        return self.parse_power()

    def parse_power(self) -> RawNode:
        base = self.parse_primary_chain()
        if self.kind() == "**":
            node = RawNode("binary_operator", base.start, base.end)
            node.add(base, "left")
            node.add(leaf(self.advance()), "operator")
            node.add(self.parse_unary(), "right")
            return node
        return base

    def parse_primary_chain(self) -> RawNode:
        expr = self.parse_atom()
        while True:
            k = self.kind()
            if k == "(":
                node = RawNode("call", expr.start, expr.end)
                node.add(expr, "function")
                node.add(self.parse_call_arguments(), "arguments")
                expr = node
            elif k == "[":
                node = RawNode("subscript", expr.start, expr.end)
                node.add(expr, "value")
                node.add(leaf(self.advance()))
                if self.kind() != "]":
                    node.add(self.parse_subscript_index(), "subscript")
                node.add(self.expect("]"))
                expr = node
            elif k == ".":
                node = RawNode("attribute", expr.start, expr.end)
                node.add(expr, "object")
                node.add(leaf(self.advance()))
                node.add(self.expect("identifier"), "attribute")
                expr = node
            else:
                return expr

    def parse_subscript_index(self) -> RawNode:
        first = None if self.kind() == ":" else self.parse_expression()
        if self.kind() != ":":
            return first if first is not None else missing_leaf("identifier", self.peek().start)
        node = self.node("slice")
        if first is not None:
            node.add(first)
            node.start = first.start
        while self.kind() == ":":
            node.add(leaf(self.advance()))
            if self.kind() not in ("]", ":", "@eof"):
                node.add(self.parse_expression())
        return node

    def parse_call_arguments(self) -> RawNode:
        node = self.node("argument_list")
        node.add(self.expect("("))
        while self.kind() not in (")", "@eof"):
            before = self.pos
            if self.kind() == "identifier" and self.kind(1) == "=":
                kw = self.node("keyword_argument")
                kw.add(leaf(self.advance()), "name")
                kw.add(leaf(self.advance()))
                kw.add(self.parse_expression(), "value")
                node.add(kw)
            elif self.kind() in ("*", "**"):
                node.add(leaf(self.advance()))
                node.add(self.parse_expression())
            else:
                node.add(self.parse_expression())
            if self.kind() == ",":
                node.add(leaf(self.advance()))
            if self.pos == before:
                node.add(self.error_advance())
        node.add(self.expect(")"))
        return node

    def parse_atom(self) -> RawNode:
        k = self.kind()
        if k in ("identifier", "number", "string", "true", "false", "none", "float", "integer"):
            tok = self.advance()
            if tok.kind == "number":
                text = self.text[tok.start : tok.end]
                kind = "float" if ("." in text or (("e" in text or "E" in text) and not text.lower().startswith("0x"))) else "integer"
                return RawNode(kind, tok.start, tok.end, error=tok.error)
            return leaf(tok)
        if k == "(":
            open_tok = self.advance()
            if self.kind() == ")":
                node = RawNode("tuple", open_tok.start, open_tok.end)
                node.add(RawNode("(", open_tok.start, open_tok.end))
                node.add(leaf(self.advance()))
                return node
            inner = self.parse_expression_list()
            kind = "tuple" if inner.kind == "expression_list" else "parenthesized_expression"
            node = RawNode(kind, open_tok.start, open_tok.end)
            node.add(RawNode("(", open_tok.start, open_tok.end))
            if inner.kind == "expression_list":
                for lbl, child in inner.children:
                    node.add(child, lbl)
            else:
                node.add(inner)
            node.add(self.expect(")"))
            return node
        if k == "[":
            node = self.node("list")
            node.add(leaf(self.advance()))
            while self.kind() not in ("]", "@eof"):
                before = self.pos
                node.add(self.parse_expression())
                if self.kind() == "for":
                    # comprehension: consume loosely
                    node.kind = "list_comprehension"
                    self.consume_brackets_to(node, "]")
                    break
                if self.kind() == ",":
                    node.add(leaf(self.advance()))
                if self.pos == before:
                    node.add(self.error_advance())
            node.add(self.expect("]"))
            return node
        if k == "{":
            node = self.node("dictionary")
            node.add(leaf(self.advance()))
            while self.kind() not in ("}", "@eof"):
                before = self.pos
                key = self.parse_expression()
                if self.kind() == ":":
                    pair = RawNode("pair", key.start, key.end)
                    pair.add(key, "key")
                    pair.add(leaf(self.advance()))
                    pair.add(self.parse_expression(), "value")
                    node.add(pair)
                else:
                    node.kind = "set"
                    node.add(key)
                if self.kind() == "for":
                    node.kind = "dictionary_comprehension" if node.kind == "dictionary" else "set_comprehension"
                    self.consume_brackets_to(node, "}")
                    break
                if self.kind() == ",":
                    node.add(leaf(self.advance()))
                if self.pos == before:
                    node.add(self.error_advance())
            node.add(self.expect("}"))
            return node
        if k in ("yield", "await"):
            node = self.node(f"{k}_expression" if k == "await" else "yield")
            node.add(leaf(self.advance()))
            if self.kind() not in ("@newline", "@eof", ")", "]", "}", ",", ";"):
                node.add(self.parse_expression())
            return node
        if k in (")", "]", "}", ",", ":", ";", "@newline", "@eof", "@dedent", "="):
            return missing_leaf("identifier", self.peek().start)
        return self.error_advance()

    def consume_brackets_to(self, node: RawNode, close: str) -> None:
        depth = 0
        while not self.at_eof():
            k = self.kind()
            if k in ("([{"):
                depth += 1
            elif k in (")]}"):
                if depth == 0 and k == close:
                    return
                depth = max(0, depth - 1)
            tok = self.advance()
            if not tok.synthetic:
                node.add(leaf(tok))


def parse(text: str) -> RawNode:
    return PythonParser(PythonLexer(text).run(), text).parse()


def lex(text: str):
    return PythonLexer(text).run()
