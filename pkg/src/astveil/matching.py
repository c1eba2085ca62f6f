"""Pattern containment and instance enumeration over AST graphs.

An embedding is an injective map from pattern nodes to graph nodes
preserving node kinds, parent-child edges, and edge labels. Child
order is not constrained. Because graphs are trees, injectivity only
has to be enforced among siblings: distinct child subtrees are
disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import AstGraph
from .patterns import Pattern

# instance enumeration stops collecting past this many embeddings per
# root; far beyond any limit= used by callers
_ENUM_CAP = 10000


@dataclass(frozen=True)
class PatternInstance:
    pattern_id: str
    mapping: tuple[tuple[int, int], ...]  # (pattern local id, graph node id), sorted by local id
    root_span: tuple[int, int]

    def node_for(self, local_id: int) -> int:
        return dict(self.mapping)[local_id]


class _Matcher:
    def __init__(self, graph: AstGraph, pattern: Pattern):
        self.graph = graph
        self.pattern = pattern
        self.kinds = dict(pattern.nodes)
        self.feasible_memo: dict[tuple[int, int], bool] = {}

    def feasible(self, p: int, g: int) -> bool:
        key = (p, g)
        cached = self.feasible_memo.get(key)
        if cached is not None:
            return cached
        ok = False
        if self.kinds[p] == self.graph.kinds[g]:
            ok = self._assign_exists(self.pattern.children[p], self.graph.children[g], g)
        self.feasible_memo[key] = ok
        return ok

    def _assign_exists(self, pkids: list[tuple[str, int]], gkids: list[int], g: int) -> bool:
        if not pkids:
            return True
        graph = self.graph

        def backtrack(idx: int, used: set[int]) -> bool:
            if idx == len(pkids):
                return True
            label, pc = pkids[idx]
            for gc in gkids:
                if gc in used or graph.edge_labels[gc] != label:
                    continue
                if self.feasible(pc, gc):
                    used.add(gc)
                    if backtrack(idx + 1, used):
                        used.discard(gc)
                        return True
                    used.discard(gc)
            return False

        return backtrack(0, set())

    def enumerate_at(self, g_root: int) -> list[dict[int, int]]:
        """All embeddings mapping the pattern root onto g_root."""
        if not self.feasible(self.pattern.root, g_root):
            return []
        return self._embeddings(self.pattern.root, g_root)

    def _embeddings(self, p: int, g: int) -> list[dict[int, int]]:
        pkids = self.pattern.children[p]
        base = {p: g}
        if not pkids:
            return [base]
        gkids = self.graph.children[g]
        results: list[dict[int, int]] = []

        def backtrack(idx: int, used: list[int], partial: list[list[dict[int, int]]]) -> None:
            if len(results) >= _ENUM_CAP:
                return
            if idx == len(pkids):
                combined: list[dict[int, int]] = [dict(base)]
                for sub_maps in partial:
                    merged = []
                    for m in combined:
                        for s in sub_maps:
                            joined = dict(m)
                            joined.update(s)
                            merged.append(joined)
                            if len(merged) > _ENUM_CAP:
                                break
                        if len(merged) > _ENUM_CAP:
                            break
                    combined = merged
                results.extend(combined)
                return
            label, pc = pkids[idx]
            for gc in gkids:
                if gc in used or self.graph.edge_labels[gc] != label:
                    continue
                if not self.feasible(pc, gc):
                    continue
                sub = self._embeddings(pc, gc)
                if not sub:
                    continue
                used.append(gc)
                partial.append(sub)
                backtrack(idx + 1, used, partial)
                partial.pop()
                used.pop()

        backtrack(0, [], [])
        return results[:_ENUM_CAP]


def contains_pattern(graph: AstGraph, pattern: Pattern) -> bool:
    """True iff an injective label/edge-preserving embedding exists."""
    matcher = _Matcher(graph, pattern)
    root_kind = matcher.kinds[pattern.root]
    for g in range(len(graph)):
        if graph.kinds[g] == root_kind and matcher.feasible(pattern.root, g):
            return True
    return False


def find_instances(graph: AstGraph, pattern: Pattern, limit: int) -> list[PatternInstance]:
    """Up to `limit` embeddings, sorted lexicographically by mapped node ids."""
    if limit <= 0:
        return []
    matcher = _Matcher(graph, pattern)
    root_kind = matcher.kinds[pattern.root]
    locals_sorted = sorted(i for i, _ in pattern.nodes)
    found: list[tuple[tuple[int, ...], dict[int, int]]] = []
    for g in range(len(graph)):
        if graph.kinds[g] != root_kind:
            continue
        for mapping in matcher.enumerate_at(g):
            key = tuple(mapping[i] for i in locals_sorted)
            found.append((key, mapping))
    found.sort(key=lambda pair: pair[0])
    out = []
    for _, mapping in found[:limit]:
        root_node = mapping[pattern.root]
        out.append(
            PatternInstance(
                pattern_id=pattern.pattern_id,
                mapping=tuple(sorted(mapping.items())),
                root_span=graph.spans[root_node],
            )
        )
    return out
