"""Abstract AST patterns in canonical minimum-DFS-code form.

A pattern is a connected, rooted, labeled tree with labeled edges.
Its canonical code is the lexicographically minimal DFS code over all
DFS traversals (minimality searched exhaustively over child visit
orders, which is cheap at mined-pattern sizes), so two patterns get
equal codes iff they are isomorphic as labeled unordered trees.
"""

from __future__ import annotations

import hashlib
from itertools import permutations
from urllib.parse import quote

from .errors import DisconnectedPatternError

EdgeTuple = tuple[int, int, str, str]  # (from_idx, to_idx, edge_label, child_kind)


def _edge_cmp(a: EdgeTuple, b: EdgeTuple) -> int:
    if a[:2] == b[:2]:
        return -1 if a[2:] < b[2:] else (0 if a[2:] == b[2:] else 1)
    if a[1] != b[1]:  # forward edges: smaller discovery index first
        return -1 if a[1] < b[1] else 1
    return -1 if a[0] > b[0] else 1  # same target: deeper source wins


def _stream_cmp(sa: tuple[EdgeTuple, ...], sb: tuple[EdgeTuple, ...]) -> int:
    for ta, tb in zip(sa, sb):
        c = _edge_cmp(ta, tb)
        if c:
            return c
    return (len(sa) > len(sb)) - (len(sa) < len(sb))


class Pattern:
    """Connected labeled subtree; hashable/equal by canonical code."""

    __slots__ = ("nodes", "edges", "_code", "_children", "_root", "_sizes")

    def __init__(self, nodes, edges):
        self.nodes: tuple[tuple[int, str], ...] = tuple((int(i), str(k)) for i, k in nodes)
        self.edges: tuple[tuple[int, int, str], ...] = tuple(
            (int(p), int(c), str(e)) for p, c, e in edges
        )
        self._code: str | None = None
        self._children: dict[int, list[tuple[str, int]]] | None = None
        self._root: int | None = None
        self._sizes: dict[int, int] | None = None

    # --- structure -------------------------------------------------------
    def kind(self, local_id: int) -> str:
        return dict(self.nodes)[local_id]

    @property
    def children(self) -> dict[int, list[tuple[str, int]]]:
        if self._children is None:
            table: dict[int, list[tuple[str, int]]] = {i: [] for i, _ in self.nodes}
            for parent, child, label in self.edges:
                table[parent].append((label, child))
            self._children = table
        return self._children

    @property
    def root(self) -> int:
        if self._root is None:
            ids = {i for i, _ in self.nodes}
            targets = {c for _, c, _ in self.edges}
            roots = ids - targets
            if len(self.edges) != len(ids) - 1 or len(roots) != 1:
                raise DisconnectedPatternError(
                    f"pattern with {len(ids)} nodes / {len(self.edges)} edges is not a rooted tree"
                )
            # reachability check
            seen = set()
            stack = [next(iter(roots))]
            while stack:
                cur = stack.pop()
                seen.add(cur)
                stack.extend(c for _, c in self.children.get(cur, []))
            if seen != ids:
                raise DisconnectedPatternError("pattern has unreachable nodes")
            self._root = next(iter(roots))
        return self._root

    def _size(self, v: int) -> int:
        if self._sizes is None:
            self._sizes = {}
        if v not in self._sizes:
            self._sizes[v] = 1 + sum(self._size(c) for _, c in self.children[v])
        return self._sizes[v]

    # --- canonical code ----------------------------------------------------
    def _min_stream(self, v: int, memo: dict[int, tuple[EdgeTuple, ...]]) -> tuple[EdgeTuple, ...]:
        if v in memo:
            return memo[v]
        kids = self.children[v]
        if not kids:
            memo[v] = ()
            return ()
        parts = []
        kinds = dict(self.nodes)
        for label, child in kids:
            parts.append((label, kinds[child], self._min_stream(child, memo), self._size(child)))
        best: tuple[EdgeTuple, ...] | None = None
        seen_orders = set()
        for perm in permutations(range(len(parts))):
            signature = tuple(parts[i][:3] for i in perm)
            if signature in seen_orders:
                continue
            seen_orders.add(signature)
            stream: list[EdgeTuple] = []
            next_idx = 1
            for i in perm:
                label, kind, sub, size = parts[i]
                here = next_idx
                stream.append((0, here, label, kind))
                for fi, ti, el, ck in sub:
                    stream.append((fi + here, ti + here, el, ck))
                next_idx += size
            candidate = tuple(stream)
            if best is None or _stream_cmp(candidate, best) < 0:
                best = candidate
        memo[v] = best
        return best

    @property
    def canonical_code(self) -> str:
        if self._code is None:
            root = self.root
            stream = self._min_stream(root, {})
            head = quote(self.kind(root), safe="")
            body = "".join(f"|{i},{j},{quote(e, safe='')},{quote(k, safe='')}" for i, j, e, k in stream)
            self._code = head + body
        return self._code

    @property
    def pattern_id(self) -> str:
        return "p" + hashlib.sha1(self.canonical_code.encode()).hexdigest()[:12]

    def edge_count(self) -> int:
        return len(self.edges)

    def __eq__(self, other) -> bool:
        return isinstance(other, Pattern) and self.canonical_code == other.canonical_code

    def __hash__(self) -> int:
        return hash(self.canonical_code)

    def __repr__(self) -> str:
        return f"Pattern({self.canonical_code})"

    # --- conversion ----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "id": self.pattern_id,
            "canonical_code": self.canonical_code,
            "nodes": [[i, k] for i, k in self.nodes],
            "edges": [[p, c, e] for p, c, e in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Pattern":
        return cls(nodes=data["nodes"], edges=data["edges"])

    @classmethod
    def single(cls, kind: str) -> "Pattern":
        return cls(nodes=[(0, kind)], edges=[])

    @classmethod
    def from_tree(cls, tree) -> "Pattern":
        """Build from nested (kind, [(edge_label, subtree), ...]) literals."""
        nodes: list[tuple[int, str]] = []
        edges: list[tuple[int, int, str]] = []

        def walk(spec) -> int:
            kind, kids = spec if isinstance(spec, tuple) else (spec, [])
            my_id = len(nodes)
            nodes.append((my_id, kind))
            for label, sub in kids:
                child_id = walk(sub)
                edges.append((my_id, child_id, label))
            return my_id

        walk(tree)
        return cls(nodes, edges)


def canonical_dfs_code(pattern: Pattern) -> str:
    """Minimum DFS code; raises Disconnected for non-tree inputs."""
    return pattern.canonical_code
