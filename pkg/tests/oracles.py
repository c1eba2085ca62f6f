"""Independent brute-force oracles used to validate the library.

These deliberately avoid the library's matcher and miner internals:
embeddings come from exhaustive injective-assignment search, frequent
subtrees from exhaustive connected-subset enumeration, and isomorphism
from direct backtracking over child bijections.
"""

from itertools import combinations, permutations
from random import Random

from astveil.graphs import AstGraph
from astveil.patterns import Pattern


def brute_force_embeddings(graph: AstGraph, pattern: Pattern) -> list[dict[int, int]]:
    """Every injective, label- and edge-preserving map, by exhaustion."""
    locals_ = sorted(i for i, _ in pattern.nodes)
    kinds = dict(pattern.nodes)
    out = []
    for assignment in permutations(range(len(graph)), len(locals_)):
        mapping = dict(zip(locals_, assignment))
        if any(graph.kinds[mapping[i]] != kinds[i] for i in locals_):
            continue
        ok = True
        for parent, child, elabel in pattern.edges:
            gchild = mapping[child]
            if graph.parents[gchild] != mapping[parent] or graph.edge_labels[gchild] != elabel:
                ok = False
                break
        if ok:
            out.append(mapping)
    return out


def brute_force_contains(graph: AstGraph, pattern: Pattern) -> bool:
    return bool(brute_force_embeddings(graph, pattern))


def connected_subtree_codes(graph: AstGraph, max_edges: int) -> set[str]:
    """Canonical codes of every connected subtree with <= max_edges edges."""
    n = len(graph)
    codes: set[str] = set()
    for size in range(1, max_edges + 2):
        for subset in combinations(range(n), size):
            chosen = set(subset)
            # connected iff exactly one member's parent is outside
            outside_parents = sum(1 for nid in subset if graph.parents[nid] not in chosen)
            if outside_parents != 1:
                continue
            relabel = {nid: i for i, nid in enumerate(subset)}
            nodes = [(relabel[nid], graph.kinds[nid]) for nid in subset]
            edges = [
                (relabel[graph.parents[nid]], relabel[nid], graph.edge_labels[nid])
                for nid in subset
                if graph.parents[nid] in chosen
            ]
            codes.add(Pattern(nodes, edges).canonical_code)
    return codes


def brute_force_frequent(graphs: list[AstGraph], min_support: int, max_edges: int) -> set[str]:
    """Codes of patterns contained in >= min_support graphs."""
    per_graph = [connected_subtree_codes(g, max_edges) for g in graphs]
    counts: dict[str, int] = {}
    for codes in per_graph:
        for code in codes:
            counts[code] = counts.get(code, 0) + 1
    return {code for code, count in counts.items() if count >= min_support}


def trees_isomorphic(a: Pattern, b: Pattern) -> bool:
    """Rooted labeled unordered tree isomorphism by backtracking."""
    if len(a.nodes) != len(b.nodes) or len(a.edges) != len(b.edges):
        return False
    ka, kb = dict(a.nodes), dict(b.nodes)

    def match(na: int, nb: int) -> bool:
        if ka[na] != kb[nb]:
            return False
        ca, cb = a.children[na], b.children[nb]
        if len(ca) != len(cb):
            return False

        def assign(i: int, used: set[int]) -> bool:
            if i == len(ca):
                return True
            la, child_a = ca[i]
            for j, (lb, child_b) in enumerate(cb):
                if j in used or la != lb:
                    continue
                if match(child_a, child_b):
                    used.add(j)
                    if assign(i + 1, used):
                        used.discard(j)
                        return True
                    used.discard(j)
            return False

        return assign(0, set())

    return match(a.root, b.root)


def random_tree_graph(rng: Random, max_nodes: int, labels, edge_labels=("child",)) -> AstGraph:
    graph = AstGraph()
    n = rng.randint(1, max_nodes)
    graph.add_node(rng.choice(labels), (0, 0), -1, "")
    for _ in range(n - 1):
        parent = rng.randrange(len(graph))
        graph.add_node(rng.choice(labels), (0, 0), parent, rng.choice(edge_labels))
    return graph


def random_pattern(rng: Random, max_nodes: int, labels, edge_labels=("child",)) -> Pattern:
    n = rng.randint(1, max_nodes)
    nodes = [(0, rng.choice(labels))]
    edges = []
    for i in range(1, n):
        parent = rng.randrange(i)
        nodes.append((i, rng.choice(labels)))
        edges.append((parent, i, rng.choice(edge_labels)))
    return Pattern(nodes, edges)


def graph_to_pattern(graph: AstGraph) -> Pattern:
    nodes = [(i, graph.kinds[i]) for i in range(len(graph))]
    edges = [(graph.parents[i], i, graph.edge_labels[i]) for i in range(1, len(graph))]
    return Pattern(nodes, edges)
