"""Grammar bundle behavior: parse shapes, error flags, tokenization."""

import pytest

from astveil.errors import EmptyGraphError, UnsupportedLanguageError
from astveil.graphs import AstGraph, SourceUnit, has_parse_error, parse_source, tokenize
from conftest import parse


class TestPythonParse:
    def test_empty_body_function_kinds(self):
        _, g = parse("python", "def f(): pass")
        kinds = set(g.kinds)
        assert {"module", "function_definition", "pass_statement"} <= kinds
        assert not has_parse_error(g)

    def test_tree_edges_root_is_module(self):
        _, g = parse("python", "def f(): pass")
        assert g.kinds[g.root] == "module"
        assert g.parents[g.root] == -1
        for nid in range(1, len(g)):
            assert 0 <= g.parents[nid] < nid

    def test_spans_nested_in_parent(self):
        _, g = parse("python", "def f(x):\n    return x + 1\n")
        for nid in range(1, len(g)):
            ps, pe = g.spans[g.parents[nid]]
            s, e = g.spans[nid]
            assert ps <= s and e <= pe

    def test_unbalanced_parens_is_error(self):
        _, g = parse("python", "((((")
        assert has_parse_error(g)
        assert sum(1 for i in range(len(g)) if g.is_error(i) or g.is_missing(i)) > 0

    def test_if_elif_else(self):
        _, g = parse("python", "if a:\n    x = 1\nelif b:\n    x = 2\nelse:\n    x = 3\n")
        assert not has_parse_error(g)
        assert "elif_clause" in g.kinds and "else_clause" in g.kinds

    def test_comparison_chain(self):
        _, g = parse("python", "x = a < b < c")
        assert "comparison_operator" in g.kinds

    def test_strings_and_calls(self):
        _, g = parse("python", "print('hi', n=3)\ny = f'a{b}'\n")
        assert not has_parse_error(g)
        assert "call" in g.kinds and "keyword_argument" in g.kinds

    def test_try_with(self):
        text = "try:\n    f()\nexcept ValueError as e:\n    pass\nfinally:\n    g()\n"
        _, g = parse("python", text)
        assert not has_parse_error(g)
        _, g2 = parse("python", "with open(p) as fh:\n    fh.read()\n")
        assert not has_parse_error(g2)

    def test_empty_suite_is_error(self):
        _, g = parse("python", "def f():\n")
        assert has_parse_error(g)


class TestCParse:
    def test_expression_statement_inside_function(self):
        _, g = parse("c", "void f() { x = 1; }")
        assert g.kinds.count("expression_statement") == 1
        assert not has_parse_error(g)

    def test_if_ok_and_broken(self):
        _, g1 = parse("c", "if (a) {}")
        assert not has_parse_error(g1)
        _, g2 = parse("c", "if (a {")
        assert has_parse_error(g2)

    def test_condition_edge_is_direct(self):
        _, g = parse("c", "if (a<b) {}")
        ifs = [i for i, k in enumerate(g.kinds) if k == "if_statement"]
        assert len(ifs) == 1
        cond = [c for c in g.children[ifs[0]] if g.edge_labels[c] == "condition"]
        assert len(cond) == 1 and g.kinds[cond[0]] == "binary_expression"

    def test_declaration_and_for(self):
        _, g = parse("c", "int f() { for (int i = 0; i < 3; i++) { s += i; } return s; }")
        assert not has_parse_error(g)
        assert "for_statement" in g.kinds and "declaration" in g.kinds

    def test_do_while_and_pointers(self):
        _, g = parse("c", "void f(int *p) { do { (*p)++; } while (*p < 10); }")
        assert not has_parse_error(g)
        assert "do_statement" in g.kinds

    def test_preproc_tolerated(self):
        _, g = parse("c", "#include <stdio.h>\nint main() { return 0; }\n")
        assert not has_parse_error(g)


class TestJavaParse:
    def test_class_with_method(self):
        text = "public class A {\n    public int f(int x) {\n        int y = x + 1;\n        return y;\n    }\n}"
        _, g = parse("java", text)
        assert not has_parse_error(g)
        assert {"class_declaration", "method_declaration", "local_variable_declaration"} <= set(g.kinds)

    def test_object_creation_and_calls(self):
        _, g = parse("java", "void f() { Foo x = new Foo(1); x.bar(2); }")
        assert not has_parse_error(g)
        assert "object_creation_expression" in g.kinds and "method_invocation" in g.kinds


class TestTokenize:
    def test_three_tokens(self):
        assert len(tokenize(SourceUnit("t", "python", "a = 1"))) == 3

    def test_empty_text(self):
        assert tokenize(SourceUnit("t", "python", "")) == []

    def test_c_token_count(self):
        # if ( false ) { x = 0 ; }
        assert len(tokenize(SourceUnit("t", "c", "if(false){x=0;}"))) == 10

    def test_comments_excluded(self):
        assert len(tokenize(SourceUnit("t", "c", "x = 1; // note\n/* more */"))) == 4
        assert len(tokenize(SourceUnit("t", "python", "a = 1  # note"))) == 3


class TestRoundTrip:
    SAMPLES = [
        ("python", "def f(x):\n    if x > 0:\n        return x * 2\n    return 0\n"),
        ("c", "int f(int x) {\n    while (x > 0) { x--; }\n    return x;\n}\n"),
        ("java", "class A { int f(int x) { for (int i = 0; i < x; i++) { x += i; } return x; } }"),
    ]

    @pytest.mark.parametrize("language,text", SAMPLES)
    def test_node_spans_relex_to_leaf_tokens(self, language, text):
        unit, g = parse(language, text)
        for nid in range(len(g)):
            s, e = g.spans[nid]
            if s >= e:
                continue
            leaf_texts = [
                text[g.spans[d][0] : g.spans[d][1]]
                for d in g.subtree(nid)
                if g.is_leaf(d) and g.spans[d][0] < g.spans[d][1]
            ]
            relexed = tokenize(SourceUnit("t", language, text[s:e]))
            relexed_texts = [text[s:e][a:b] for _, a, b in relexed]
            assert relexed_texts == leaf_texts


class TestErrors:
    def test_unsupported_language(self):
        with pytest.raises(UnsupportedLanguageError):
            parse_source(SourceUnit("t", "ruby", "puts 1"))

    def test_empty_graph_rejected(self):
        with pytest.raises(EmptyGraphError):
            has_parse_error(AstGraph())
