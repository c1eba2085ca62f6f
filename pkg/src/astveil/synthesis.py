"""Pattern-to-template synthesis and guarded insertion.

A mined pattern is concretized by copying the text of one of its
corpus instances and masking out content-bearing and unmapped parts
with the literal `<MASK>` token. The semantics guard then either
rewrites the conditional slot to a constant-false conjunction or wraps
the whole template in a dead block, so the inserted code can never
execute.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import grammar
from .errors import IndentationUnresolvableError, NoInstanceFoundError
from .graphs import AstGraph, SourceUnit, Statement, parse_source
from .matching import find_instances
from .mining import ProbeCorpus
from .patterns import Pattern

MASK = "<MASK>"


@dataclass(frozen=True)
class MaskedTemplate:
    pattern_id: str
    text: str
    guard_kind: str  # "conditional" | "plain"
    language: str
    condition_span: tuple[int, int] | None = None
    guard_applied: bool = False

    def mask_count(self) -> int:
        return self.text.count(MASK)

    def to_json(self) -> dict:
        return {
            "pattern_id": self.pattern_id,
            "text": self.text,
            "guard_kind": self.guard_kind,
            "language": self.language,
            "condition_span": list(self.condition_span) if self.condition_span else None,
            "guard_applied": self.guard_applied,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MaskedTemplate":
        span = data.get("condition_span")
        return cls(
            pattern_id=data["pattern_id"],
            text=data["text"],
            guard_kind=data["guard_kind"],
            language=data["language"],
            condition_span=tuple(span) if span else None,
            guard_applied=data.get("guard_applied", False),
        )


@dataclass(frozen=True)
class MaskedSource:
    base_unit_id: str
    text: str
    insertion_span: tuple[int, int]

    def without_insertion(self) -> str:
        s, e = self.insertion_span
        return self.text[:s] + self.text[e:]

    def mask_count(self) -> int:
        return self.text.count(MASK)


class _OffsetMap:
    """Tracks how replacement edits move positions around."""

    def __init__(self, edits: list[tuple[int, int, int]]):
        # (start, end, new_length), non-overlapping, sorted
        self.edits = sorted(edits)

    def map(self, pos: int, left: bool = True) -> int:
        delta = 0
        for start, end, new_len in self.edits:
            if end < pos or (end == pos and not left) or (end == pos and start == end):
                delta += new_len - (end - start)
            elif start >= pos:
                break
            elif start < pos < end:
                # inside an edit: snap to the chosen boundary
                return start + delta if left else start + delta + new_len
            elif end == pos and left:
                delta += new_len - (end - start)
        return pos + delta


def _apply_edits(text: str, edits: list[tuple[int, int, str]]) -> str:
    out = text
    for start, end, repl in sorted(edits, reverse=True):
        out = out[:start] + repl + out[end:]
    return out


def _string_inner_span(text: str, span: tuple[int, int]) -> tuple[int, int]:
    """Span of a string token's content, delimiters excluded."""
    s, e = span
    tok = text[s:e]
    i = 0
    while i < len(tok) and tok[i] not in "'\"":
        i += 1
    if i >= len(tok):
        return span
    quote = tok[i]
    q = quote * 3 if tok.startswith(quote * 3, i) else quote
    start = s + i + len(q)
    end = e - len(q) if tok.endswith(q) and e - len(q) >= start else e
    return (start, end)


def _is_kept_leaf(graph: AstGraph, nid: int) -> bool:
    """Unmapped leaves kept verbatim: keywords and punctuation."""
    if not graph.is_leaf(nid):
        return False
    kind = graph.kinds[nid]
    if kind in grammar.CONTENT_LEAF_KINDS:
        return False
    return grammar.is_keyword_leaf(kind) or kind in grammar.PUNCT_KINDS


def pattern_to_template(
    pattern: Pattern,
    corpus: ProbeCorpus,
    instance_rank: int = 0,
) -> MaskedTemplate:
    """Render a pattern through its first corpus instance.

    Masks (a) the content of every identifier/literal leaf in the
    instance subtree and (b) every unmapped child subtree hanging off a
    mapped node, except inert keyword/punctuation leaves. With
    `instance_rank` > 0 a later instance (among the first five) is
    used instead, for attack diversity.
    """
    hit = None
    fallback = None
    seen = 0
    for record in corpus.records:
        instances = find_instances(record.graph, pattern, limit=instance_rank + 1)
        if not instances:
            continue
        if fallback is None:
            fallback = (record, instances[0])
        if seen + len(instances) > instance_rank:
            hit = (record, instances[instance_rank - seen])
            break
        seen += len(instances)
    if hit is None:
        hit = fallback  # corpus has fewer instances than the requested rank
    if hit is None:
        raise NoInstanceFoundError(f"pattern {pattern.pattern_id} has no instance in the corpus")
    record, instance = hit
    graph, text = record.graph, record.unit.text
    language = record.unit.language
    mapped = {gnode for _, gnode in instance.mapping}
    root_node = instance.node_for(pattern.root)
    root_span = graph.spans[root_node]

    masked: list[tuple[int, int]] = []
    for m in sorted(mapped):
        for child in graph.children[m]:
            if child in mapped:
                continue
            if _is_kept_leaf(graph, child):
                continue
            span = graph.spans[child]
            if span[0] >= span[1]:
                continue
            masked.append(span)

    def covered(span: tuple[int, int]) -> bool:
        return any(s <= span[0] and span[1] <= e for s, e in masked)

    content_masked: list[tuple[int, int]] = []
    for nid in graph.subtree(root_node):
        kind = graph.kinds[nid]
        if not graph.is_leaf(nid) or kind not in grammar.CONTENT_LEAF_KINDS:
            continue
        span = graph.spans[nid]
        if covered(span):
            continue
        if kind in grammar.STRING_LEAF_KINDS:
            content_masked.append(_string_inner_span(text, span))
        else:
            content_masked.append(span)

    all_spans = sorted(set(masked) | set(content_masked))
    edits = [(s, e, MASK) for s, e in all_spans if root_span[0] <= s and e <= root_span[1]]
    mask_map = _OffsetMap([(s, e, len(MASK)) for s, e, _ in edits])

    snippet = _apply_edits(text, edits)[mask_map.map(root_span[0]) : mask_map.map(root_span[1], left=False)]
    rel = root_span[0]

    # strip the instance's own indentation from continuation lines
    line_start = text.rfind("\n", 0, root_span[0]) + 1
    base_col = root_span[0] - line_start
    lines = snippet.split("\n")
    dedent_cuts = []
    offset = len(lines[0]) + 1
    for line in lines[1:]:
        strip = 0
        while strip < base_col and strip < len(line) and line[strip] in " \t":
            strip += 1
        if strip:
            dedent_cuts.append((offset, offset + strip, 0))
        offset += len(line) + 1
    dedent_map = _OffsetMap(dedent_cuts)
    template_text = _apply_edits(snippet, [(s, e, "") for s, e, _ in dedent_cuts])

    guards = grammar.guard_table(language)
    condition_span = None
    guard_kind = "plain"
    if graph.kinds[root_node] in guards["conditional_kinds"]:
        for child in graph.children[root_node]:
            if graph.edge_labels[child] == "condition":
                cs, ce = graph.spans[child]
                rel_start = mask_map.map(cs, left=True) - mask_map.map(rel, left=True)
                rel_end = mask_map.map(ce, left=False) - mask_map.map(rel, left=True)
                condition_span = (
                    dedent_map.map(rel_start, left=True),
                    dedent_map.map(rel_end, left=False),
                )
                guard_kind = "conditional"
                break

    return MaskedTemplate(
        pattern_id=pattern.pattern_id,
        text=template_text,
        guard_kind=guard_kind,
        language=language,
        condition_span=condition_span,
    )


def apply_semantics_guard(template: MaskedTemplate) -> MaskedTemplate:
    """Make the template unable to execute when inserted."""
    if template.guard_applied:
        return template
    guards = grammar.guard_table(template.language)
    if template.guard_kind == "conditional" and template.condition_span is not None:
        s, e = template.condition_span
        condition = template.text[s:e]
        guarded = guards["false_guard"].format(condition=condition)
        new_text = template.text[:s] + guarded + template.text[e:]
        return replace(template, text=new_text, condition_span=(s, s + len(guarded)), guard_applied=True)
    indent = guards["indent"]
    body_text = template.text
    if template.language != "python" and not body_text.rstrip().endswith((";", "}")):
        # expression-rooted templates need the statement terminator to
        # be legal inside the dead block
        body_text = body_text + ";"
    lines = body_text.split("\n")
    if template.language == "python":
        body = "\n".join(indent + line if line.strip() else line for line in lines)
        new_text = guards["dead_block_open"] + "\n" + body
    elif len(lines) == 1:
        new_text = guards["dead_block_single"].format(body=body_text)
    else:
        body = "\n".join(indent + line if line.strip() else line for line in lines)
        new_text = guards["dead_block_open"] + "\n" + body + "\n" + guards["dead_block_close"]
    return replace(template, text=new_text, condition_span=None, guard_applied=True)


def _line_bounds(text: str, pos: int) -> tuple[int, int]:
    start = text.rfind("\n", 0, pos) + 1
    end = text.find("\n", pos)
    return start, len(text) if end < 0 else end


def _comment_only(tail: str, language: str) -> bool:
    tail = tail.strip()
    if not tail:
        return True
    marker = "#" if language == "python" else "//"
    return tail.startswith(marker)


def _python_suite_is_inline(graph: AstGraph, stmt: Statement, text: str) -> bool:
    node = graph.parents[stmt.node_id]
    while node >= 0 and graph.kinds[node] not in ("block", "module"):
        node = graph.parents[node]
    if node < 0 or graph.kinds[node] == "module":
        return False
    block_start = graph.spans[node][0]
    line_start = text.rfind("\n", 0, block_start) + 1
    return bool(text[line_start:block_start].strip())


def render_insertion(
    unit: SourceUnit,
    stmt: Statement,
    template: MaskedTemplate,
    graph: AstGraph | None = None,
) -> MaskedSource:
    """Insert the guarded template on a new line after the statement,
    re-indented to the statement's indentation."""
    if not template.guard_applied:
        raise ValueError("render_insertion requires a guard-applied template")
    text = unit.text
    if graph is None:
        graph = parse_source(unit)
    start, end = stmt.span
    line_start, _ = _line_bounds(text, start)
    prefix = text[line_start:start]
    if prefix.strip():
        raise IndentationUnresolvableError(f"statement at {start} does not begin its line")
    _, last_line_end = _line_bounds(text, max(start, end - 1) if end > start else start)
    if not _comment_only(text[end:last_line_end], unit.language):
        raise IndentationUnresolvableError(f"statement at {start} shares its last line with other code")

    guards = grammar.guard_table(unit.language)
    if unit.language == "python":
        if _python_suite_is_inline(graph, stmt, text):
            raise IndentationUnresolvableError("inline suites cannot host sibling statements")
    else:
        parent = graph.parents[stmt.node_id]
        if parent < 0 or graph.kinds[parent] not in guards["statement_hosts"]:
            raise IndentationUnresolvableError(
                f"statement under {graph.kinds[parent] if parent >= 0 else '<none>'} is not a brace-delimited host"
            )

    indented = "\n".join(prefix + line if line.strip() else line for line in template.text.split("\n"))
    if last_line_end < len(text):
        point = last_line_end + 1
        inserted = indented + "\n"
    else:
        point = len(text)
        inserted = "\n" + indented
    new_text = text[:point] + inserted + text[point:]
    return MaskedSource(
        base_unit_id=unit.id,
        text=new_text,
        insertion_span=(point, point + len(inserted)),
    )
