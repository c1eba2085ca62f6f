"""Frequent subtree enumeration and discriminative pattern selection.

Enumeration grows patterns one edge at a time from embedding
projections (gSpan-style), deduplicating by canonical minimum DFS code
so each isomorphism class is emitted once. Selection greedily
maximizes the correspondence-based quality criterion, which is
additive per pattern: every added pattern contributes a non-positive
term counting co-absent and co-present cross-class pairs.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from urllib.parse import unquote

from .grammar import CONTENT_LEAF_KINDS
from .graphs import AstGraph, SourceUnit
from .matching import contains_pattern
from .patterns import Pattern, canonical_dfs_code

log = logging.getLogger(__name__)

__all__ = [
    "Pattern",
    "PatternSet",
    "ProbeCorpus",
    "ProbeRecord",
    "canonical_dfs_code",
    "enumerate_frequent",
    "cork_quality",
    "cork_term",
    "greedy_select",
    "build_ova_datasets",
    "pattern_from_code",
    "pattern_sets_to_json",
    "pattern_sets_from_json",
]


@dataclass
class ProbeRecord:
    unit: SourceUnit
    graph: AstGraph
    predicted_class: int


@dataclass
class ProbeCorpus:
    records: list[ProbeRecord]
    num_classes: int


@dataclass
class PatternSet:
    patterns: list[Pattern]
    target_class: int
    quality: int = 0

    def __post_init__(self):
        codes = [p.canonical_code for p in self.patterns]
        if len(set(codes)) != len(codes):
            raise ValueError("pattern set contains duplicate canonical codes")

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)


def pattern_from_code(code: str) -> Pattern:
    """Rebuild a pattern from its canonical code (inverse of encoding)."""
    head, _, rest = code.partition("|")
    nodes = [(0, unquote(head))]
    edges = []
    if rest:
        for part in rest.split("|"):
            i, j, e, k = part.split(",")
            nodes.append((int(j), unquote(k)))
            edges.append((int(i), int(j), unquote(e)))
    return Pattern(nodes, edges)


def _canonicalize(pattern: Pattern) -> Pattern:
    return pattern_from_code(pattern.canonical_code)


def enumerate_frequent(
    graphs: list[AstGraph],
    min_support: int,
    max_edges: int,
    max_embeddings_per_graph: int | None = None,
) -> list[Pattern]:
    """Exactly the connected patterns with <= max_edges edges contained
    in >= min_support graphs, each once in canonical form.

    `max_embeddings_per_graph` trades exactness for speed on large
    corpora; leave None for the exact semantics the tests rely on.
    """
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    if max_edges < 0:
        raise ValueError("max_edges must be >= 0")

    # seeds: single-kind patterns with their one-node embeddings
    seed_embeddings: dict[str, dict[int, list[tuple[int, ...]]]] = {}
    for gi, graph in enumerate(graphs):
        for nid, kind in enumerate(graph.kinds):
            seed_embeddings.setdefault(kind, {}).setdefault(gi, []).append((nid,))

    emitted: dict[str, Pattern] = {}
    queue: list[tuple[Pattern, dict[int, list[tuple[int, ...]]]]] = []
    for kind in sorted(seed_embeddings):
        embs = seed_embeddings[kind]
        if len(embs) >= min_support:
            pattern = Pattern.single(kind)
            emitted[pattern.canonical_code] = pattern
            queue.append((pattern, embs))

    while queue:
        pattern, embeddings = queue.pop()
        if pattern.edge_count() >= max_edges:
            continue
        extensions: dict[tuple[int, str, str], dict[int, list[tuple[int, ...]]]] = {}
        for gi, embs in embeddings.items():
            graph = graphs[gi]
            for emb in embs:
                taken = set(emb)
                for local, gnode in enumerate(emb):
                    for child in graph.children[gnode]:
                        if child in taken:
                            continue
                        key = (local, graph.edge_labels[child], graph.kinds[child])
                        bucket = extensions.setdefault(key, {}).setdefault(gi, [])
                        if max_embeddings_per_graph and len(bucket) >= max_embeddings_per_graph:
                            continue
                        bucket.append(emb + (child,))
        for key in sorted(extensions):
            local, elabel, ckind = key
            new_embs = extensions[key]
            if len(new_embs) < min_support:
                continue
            new_local = len(pattern.nodes)
            candidate = Pattern(
                nodes=list(pattern.nodes) + [(new_local, ckind)],
                edges=list(pattern.edges) + [(local, new_local, elabel)],
            )
            code = candidate.canonical_code
            if code in emitted:
                continue
            emitted[code] = candidate
            queue.append((candidate, new_embs))

    out = [_canonicalize(p) for p in emitted.values()]
    out.sort(key=lambda p: (len(p.nodes), p.canonical_code))
    return out


def cork_term(pattern: Pattern, positives: list[AstGraph], negatives: list[AstGraph]) -> int:
    """Correspondence count contributed by one pattern (>= 0)."""
    pos_with = sum(1 for g in positives if contains_pattern(g, pattern))
    neg_with = sum(1 for g in negatives if contains_pattern(g, pattern))
    pos_without = len(positives) - pos_with
    neg_without = len(negatives) - neg_with
    return neg_without * pos_without + neg_with * pos_with


def cork_quality(patterns, positives: list[AstGraph], negatives: list[AstGraph]) -> int:
    """Quality of a pattern set: negated sum of per-pattern correspondences."""
    return -sum(cork_term(p, positives, negatives) for p in patterns)


def _is_content_singleton(pattern: Pattern) -> bool:
    return len(pattern.nodes) == 1 and pattern.nodes[0][1] in CONTENT_LEAF_KINDS


def greedy_select(
    candidates: list[Pattern],
    positives: list[AstGraph],
    negatives: list[AstGraph],
    k: int,
    target_class: int = 1,
    exclude_content_singletons: bool = True,
) -> PatternSet:
    """Iteratively add the candidate maximizing the resulting quality.

    Ties break on lexicographic canonical code. Single identifier or
    literal nodes are excluded by default: they cannot be inserted as
    meaningful dead code.
    """
    pool = [p for p in candidates if not (exclude_content_singletons and _is_content_singleton(p))]
    terms = {p.canonical_code: cork_term(p, positives, negatives) for p in pool}
    chosen: list[Pattern] = []
    quality = 0
    remaining = sorted(pool, key=lambda p: p.canonical_code)
    while len(chosen) < k and remaining:
        best = min(remaining, key=lambda p: (terms[p.canonical_code], p.canonical_code))
        chosen.append(best)
        quality -= terms[best.canonical_code]
        remaining.remove(best)
    return PatternSet(patterns=chosen, target_class=target_class, quality=quality)


@dataclass
class OvaDataset:
    target_class: int
    positives: list[AstGraph]
    negatives: list[AstGraph]
    positive_records: list[ProbeRecord] = field(default_factory=list)


def build_ova_datasets(corpus: ProbeCorpus) -> list[OvaDataset]:
    """One-versus-all splits per class; empty classes are skipped with a warning."""
    if corpus.num_classes < 2:
        raise ValueError("one-vs-all construction needs C >= 2")
    datasets = []
    for cls in range(corpus.num_classes):
        positives = [r for r in corpus.records if r.predicted_class == cls]
        negatives = [r.graph for r in corpus.records if r.predicted_class != cls]
        if not positives:
            log.warning("class %d has no members; skipping its one-vs-all dataset", cls)
            continue
        datasets.append(
            OvaDataset(
                target_class=cls,
                positives=[r.graph for r in positives],
                negatives=negatives,
                positive_records=positives,
            )
        )
    return datasets


# --- persistence ------------------------------------------------------------


def pattern_sets_to_json(language: str, sets: list[PatternSet], templates: dict[str, dict] | None = None) -> dict:
    payload = {"version": 1, "language": language, "sets": []}
    for ps in sets:
        entry = {"target_class": ps.target_class, "quality": ps.quality, "patterns": []}
        for p in ps.patterns:
            record = p.to_json()
            if templates and p.pattern_id in templates:
                record["template"] = templates[p.pattern_id]
            entry["patterns"].append(record)
        payload["sets"].append(entry)
    return payload


def pattern_sets_from_json(payload: dict) -> tuple[str, list[PatternSet], dict[str, dict]]:
    sets = []
    templates: dict[str, dict] = {}
    for entry in payload["sets"]:
        patterns = []
        for record in entry["patterns"]:
            pattern = Pattern.from_json(record)
            patterns.append(pattern)
            if "template" in record:
                templates[pattern.pattern_id] = record["template"]
        sets.append(
            PatternSet(patterns=patterns, target_class=entry["target_class"], quality=entry["quality"])
        )
    return payload["language"], sets, templates


def save_pattern_sets(path, language: str, sets: list[PatternSet], templates=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(pattern_sets_to_json(language, sets, templates), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_pattern_sets(path) -> tuple[str, list[PatternSet], dict[str, dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        return pattern_sets_from_json(json.load(fh))
