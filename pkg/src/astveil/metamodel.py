"""Bag-of-pattern features and the decision-tree meta-model.

The meta-model predicts the victim's output class from pattern
presence bits and is used to rank candidate patterns by the estimated
probability that adding a missing pattern flips the prediction: the
routed leaf's support weighted by whether its class disagrees,
normalized by the training-set size.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

from .errors import EmptyTrainingSetError, LengthMismatchError
from .graphs import AstGraph
from .matching import contains_pattern

MAX_DEPTH = 12
MIN_LEAF = 2
MIN_GAIN = 1e-9


@dataclass(frozen=True)
class FeatureVector:
    bits: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.bits)

    def with_bit(self, index: int) -> "FeatureVector":
        bits = list(self.bits)
        bits[index] = 1
        return FeatureVector(tuple(bits))


def featurize(graph: AstGraph, patterns) -> FeatureVector:
    """Bit j set iff the graph contains pattern j (full AST, no truncation)."""
    return FeatureVector(tuple(1 if contains_pattern(graph, p) else 0 for p in patterns))


def missing_patterns(f: FeatureVector, patterns) -> list[int]:
    plist = list(patterns)
    if len(f.bits) != len(plist):
        raise LengthMismatchError(f"feature length {len(f.bits)} != pattern count {len(plist)}")
    return [j for j, bit in enumerate(f.bits) if bit == 0]


def pattern_set_fingerprint(patterns) -> str:
    joined = "\n".join(p.canonical_code for p in patterns)
    return hashlib.sha1(joined.encode()).hexdigest()[:16]


@dataclass
class MetaModel:
    root: dict
    n: int
    num_classes: int
    num_features: int
    pattern_set_id: str
    pattern_class_counts: list[list[int]] = field(default_factory=list)

    def leaves(self) -> list[dict]:
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if "leaf" in node:
                out.append(node["leaf"])
            else:
                stack.extend([node["absent"], node["present"]])
        return out

    def route(self, bits: tuple[int, ...]) -> dict:
        node = self.root
        while "leaf" not in node:
            node = node["present"] if bits[node["split"]] else node["absent"]
        return node["leaf"]

    def to_json(self) -> dict:
        return {
            "version": 1,
            "n": self.n,
            "num_classes": self.num_classes,
            "num_features": self.num_features,
            "pattern_set_id": self.pattern_set_id,
            "pattern_class_counts": self.pattern_class_counts,
            "tree": self.root,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MetaModel":
        return cls(
            root=data["tree"],
            n=data["n"],
            num_classes=data["num_classes"],
            num_features=data["num_features"],
            pattern_set_id=data["pattern_set_id"],
            pattern_class_counts=data["pattern_class_counts"],
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "MetaModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _counts(labels: list[int], idx: list[int], num_classes: int) -> list[int]:
    counts = [0] * num_classes
    for i in idx:
        counts[labels[i]] += 1
    return counts


def _gini(counts: list[int], total: int) -> float:
    if total == 0:
        return 0.0
    return 1.0 - sum((c / total) ** 2 for c in counts)


def _majority(counts: list[int]) -> int:
    best = max(counts)
    return counts.index(best)  # ties resolve to the lower class id


def _leaf(counts: list[int]) -> dict:
    return {"leaf": {"class": _majority(counts), "support": sum(counts), "counts": counts}}


def _grow(features: list[FeatureVector], labels: list[int], idx: list[int],
          num_classes: int, depth: int) -> dict:
    counts = _counts(labels, idx, num_classes)
    total = len(idx)
    impurity = _gini(counts, total)
    if depth >= MAX_DEPTH or impurity == 0.0 or total < 2 * MIN_LEAF:
        return _leaf(counts)
    num_features = len(features[idx[0]].bits)
    best_gain, best_j, best_split = 0.0, None, None
    for j in range(num_features):
        absent = [i for i in idx if features[i].bits[j] == 0]
        present = [i for i in idx if features[i].bits[j] == 1]
        if len(absent) < MIN_LEAF or len(present) < MIN_LEAF:
            continue
        ca = _counts(labels, absent, num_classes)
        cp = _counts(labels, present, num_classes)
        weighted = (len(absent) * _gini(ca, len(absent)) + len(present) * _gini(cp, len(present))) / total
        gain = impurity - weighted
        if gain > best_gain + MIN_GAIN or (best_j is None and gain > MIN_GAIN):
            best_gain, best_j, best_split = gain, j, (absent, present)
    if best_j is None:
        return _leaf(counts)
    absent, present = best_split
    return {
        "split": best_j,
        "absent": _grow(features, labels, absent, num_classes, depth + 1),
        "present": _grow(features, labels, present, num_classes, depth + 1),
    }


def train_meta(features: list[FeatureVector], labels: list[int],
               pattern_set_id: str = "") -> MetaModel:
    """Deterministic CART: Gini splits, depth cap 12, min leaf size 2."""
    if len(features) != len(labels):
        raise LengthMismatchError("features and labels differ in length")
    if not features:
        raise EmptyTrainingSetError("cannot train a meta-model on zero samples")
    num_classes = max(labels) + 1
    num_features = len(features[0].bits)
    for f in features:
        if len(f.bits) != num_features:
            raise LengthMismatchError("inconsistent feature lengths")
    root = _grow(features, labels, list(range(len(features))), num_classes, 0)
    counts = [[0] * num_classes for _ in range(num_features)]
    for f, y in zip(features, labels):
        for j, bit in enumerate(f.bits):
            if bit:
                counts[j][y] += 1
    return MetaModel(
        root=root,
        n=len(features),
        num_classes=num_classes,
        num_features=num_features,
        pattern_set_id=pattern_set_id,
        pattern_class_counts=counts,
    )


def prob_change(meta: MetaModel, f: FeatureVector, candidate: int, y: int) -> float:
    """Estimated probability that setting the candidate bit changes the
    prediction away from class y."""
    if len(f.bits) != meta.num_features:
        raise LengthMismatchError(f"feature length {len(f.bits)} != model features {meta.num_features}")
    if not 0 <= candidate < meta.num_features:
        raise LengthMismatchError(f"candidate index {candidate} out of range")
    routed = meta.route(f.with_bit(candidate).bits)
    if routed["class"] == y:
        return 0.0
    return routed["support"] / meta.n


def choose_pattern(
    meta: MetaModel,
    f: FeatureVector,
    missing: list[int],
    y: int,
    fallback: bool = True,
    temperature: float | None = None,
    rng=None,
) -> int | None:
    """Argmax of prob_change over missing patterns, ties to the lower
    index. When every probability is zero the fallback picks the
    missing pattern most frequent among training samples of other
    classes. Optional temperature sampling is for ablations only."""
    if not missing:
        return None
    probs = [prob_change(meta, f, j, y) for j in missing]
    if temperature and rng is not None and any(p > 0 for p in probs):
        weights = [math.exp(p / temperature) for p in probs]
        total = sum(weights)
        pick = rng.random() * total
        acc = 0.0
        for j, w in zip(missing, weights):
            acc += w
            if pick <= acc:
                return j
        return missing[-1]
    best = max(probs)
    if best > 0.0:
        return missing[probs.index(best)]
    if not fallback:
        return None
    scores = []
    for j in missing:
        counts = meta.pattern_class_counts[j] if j < len(meta.pattern_class_counts) else []
        scores.append(sum(c for cls, c in enumerate(counts) if cls != y))
    return missing[scores.index(max(scores))]


def rank_missing(meta: MetaModel, f: FeatureVector, y: int) -> list[int]:
    """All missing pattern indices, best flip-probability first."""
    missing = [j for j, bit in enumerate(f.bits) if bit == 0]
    scored = []
    for j in missing:
        p = prob_change(meta, f, j, y)
        counts = meta.pattern_class_counts[j] if j < len(meta.pattern_class_counts) else []
        tie = sum(c for cls, c in enumerate(counts) if cls != y)
        scored.append((-p, -tie, j))
    scored.sort()
    return [j for _, _, j in scored]
