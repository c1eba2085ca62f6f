"""Labeled AST graphs: parsing, statement segmentation, tokenization.

Node ids are dense preorder indices, so parents always precede
children and source order can be recovered without re-sorting. Spans
are [start, end) offsets into the unit text (identical to byte offsets
for ASCII sources).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import grammar
from .errors import EmptyGraphError, NonUtf8InputError, SpanOutOfBoundsError
from .grammar.lexer import RawNode

FLAG_ERROR = 1
FLAG_MISSING = 2


@dataclass(frozen=True)
class SourceUnit:
    id: str
    language: str
    text: str
    label_hint: int | None = None


@dataclass
class AstGraph:
    kinds: list[str] = field(default_factory=list)
    spans: list[tuple[int, int]] = field(default_factory=list)
    parents: list[int] = field(default_factory=list)  # -1 at root
    edge_labels: list[str] = field(default_factory=list)  # label of edge into node, "" at root
    flags: list[int] = field(default_factory=list)
    children: list[list[int]] = field(default_factory=list)
    root: int = 0

    def __len__(self) -> int:
        return len(self.kinds)

    def add_node(self, kind: str, span: tuple[int, int], parent: int, edge_label: str, flags: int = 0) -> int:
        nid = len(self.kinds)
        self.kinds.append(kind)
        self.spans.append(span)
        self.parents.append(parent)
        self.edge_labels.append(edge_label)
        self.flags.append(flags)
        self.children.append([])
        if parent >= 0:
            self.children[parent].append(nid)
        return nid

    def edges(self) -> list[tuple[int, int, str]]:
        return [(self.parents[i], i, self.edge_labels[i]) for i in range(1, len(self.kinds))]

    def is_leaf(self, nid: int) -> bool:
        return not self.children[nid]

    def is_error(self, nid: int) -> bool:
        return bool(self.flags[nid] & FLAG_ERROR) or self.kinds[nid] == "ERROR"

    def is_missing(self, nid: int) -> bool:
        return bool(self.flags[nid] & FLAG_MISSING)

    def subtree(self, nid: int) -> list[int]:
        out = [nid]
        stack = list(reversed(self.children[nid]))
        while stack:
            cur = stack.pop()
            out.append(cur)
            stack.extend(reversed(self.children[cur]))
        return sorted(out)

    def kind_index(self) -> dict[str, list[int]]:
        index: dict[str, list[int]] = {}
        for nid, kind in enumerate(self.kinds):
            index.setdefault(kind, []).append(nid)
        return index


@dataclass(frozen=True)
class Statement:
    owner: str
    span: tuple[int, int]
    node_id: int


def _flatten(raw: RawNode, graph: AstGraph, parent: int, edge_label: str) -> None:
    flags = (FLAG_ERROR if raw.error else 0) | (FLAG_MISSING if raw.missing else 0)
    nid = graph.add_node(raw.kind, (raw.start, raw.end), parent, edge_label, flags)
    for label, child in raw.children:
        _flatten(child, graph, nid, label)


def parse_source(unit: SourceUnit) -> AstGraph:
    """Parse a unit into its full concrete-syntax tree.

    ERROR and missing nodes are retained and flagged rather than
    raising, so malformed input still yields a graph.
    """
    bundle = grammar.get_bundle(unit.language)
    try:
        unit.text.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise NonUtf8InputError(str(exc)) from exc
    raw = bundle.parse(unit.text)
    graph = AstGraph()
    _flatten(raw, graph, -1, "")
    return graph


def has_parse_error(graph: AstGraph) -> bool:
    if len(graph) == 0:
        raise EmptyGraphError("graph has no nodes")
    return any(
        graph.flags[i] & (FLAG_ERROR | FLAG_MISSING) or graph.kinds[i] == "ERROR"
        for i in range(len(graph))
    )


def extract_statements(graph: AstGraph, unit: SourceUnit) -> list[Statement]:
    """Statement-kind nodes in source order, nested statements included."""
    kinds = grammar.statement_kinds(unit.language)
    out = [
        Statement(unit.id, graph.spans[nid], nid)
        for nid in range(len(graph))
        if graph.kinds[nid] in kinds
    ]
    out.sort(key=lambda s: (s.span[0], s.node_id))
    return out


def _expand_deletion(text: str, start: int, end: int) -> tuple[int, int]:
    """Grow a span to whole lines when the remainder would be blank."""
    line_start = text.rfind("\n", 0, start) + 1
    if text[line_start:start].strip():
        return start, end
    line_end = text.find("\n", end)
    tail_end = len(text) if line_end < 0 else line_end
    if text[end:tail_end].strip():
        return start, end
    return line_start, min(len(text), tail_end + 1)


def remove_statement(unit: SourceUnit, stmt: Statement) -> SourceUnit | None:
    """Delete a statement; None (Skip) when the remainder fails to parse."""
    start, end = stmt.span
    if not (0 <= start <= end <= len(unit.text)):
        raise SpanOutOfBoundsError(f"span {stmt.span} outside unit {unit.id}")
    start, end = _expand_deletion(unit.text, start, end)
    new_text = unit.text[:start] + unit.text[end:]
    candidate = SourceUnit(unit.id, unit.language, new_text, unit.label_hint)
    if not new_text.strip():
        return candidate
    if has_parse_error(parse_source(candidate)):
        return None
    return candidate


def tokenize(unit: SourceUnit) -> list[tuple[str, int, int]]:
    """Leaf-level lexical tokens (comments and synthetic tokens excluded)."""
    bundle = grammar.get_bundle(unit.language)
    return [
        (tok.kind, tok.start, tok.end)
        for tok in bundle.lex(unit.text)
        if not tok.synthetic
    ]


def token_count(text: str, language: str) -> int:
    return len(tokenize(SourceUnit("_", language, text)))


def truncate_graph(graph: AstGraph, max_nodes: int) -> AstGraph:
    """Preorder prefix of the graph; prefixes keep the tree connected."""
    if len(graph) <= max_nodes:
        return graph
    out = AstGraph()
    for nid in range(max_nodes):
        parent = graph.parents[nid]
        out.add_node(
            graph.kinds[nid], graph.spans[nid], parent, graph.edge_labels[nid], graph.flags[nid]
        )
    return out
