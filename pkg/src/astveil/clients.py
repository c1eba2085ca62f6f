"""Victim and filler client contracts, desk-scale surrogates, and the
generic HTTP implementations of the wire protocol.

Victim: POST /predict {"code","context","language"} -> {"probs":[...]}
Filler: POST /fill {"text","n","language"} -> {"fills":[[...],...]}
A 503 maps to ClientUnavailableError and any schema violation to
MalformedResponseError; both are retried twice before surfacing.
"""

from __future__ import annotations

import json
import os
import re
import threading
from dataclasses import dataclass
from random import Random

import httpx
import numpy as np

from .errors import ClientUnavailableError, DegenerateLabelsError, MalformedResponseError
from .grammar.c_lang import C_KEYWORDS
from .grammar.java_lang import JAVA_KEYWORDS
from .grammar.python_lang import PY_KEYWORDS
from .graphs import SourceUnit, parse_source

MASK = "<MASK>"
TOKEN_ENV = "ASTVEIL_TOKEN"

_KEYWORDS = {"python": PY_KEYWORDS, "c": C_KEYWORDS, "java": JAVA_KEYWORDS}


@dataclass(frozen=True)
class VictimPrediction:
    probs: tuple[float, ...]

    def __post_init__(self):
        if not self.probs:
            raise MalformedResponseError("empty probability vector")
        if any(p < 0 for p in self.probs):
            raise MalformedResponseError("negative probability")
        total = sum(self.probs)
        if abs(total - 1.0) > 1e-6:
            raise MalformedResponseError(f"probabilities sum to {total}, not 1")

    @property
    def predicted(self) -> int:
        best = max(self.probs)
        return self.probs.index(best)  # ties resolve to the lower index


@dataclass(frozen=True)
class FillResult:
    texts: tuple[str, ...]


# --- surrogate victim ---------------------------------------------------------


class SurrogateVictim:
    """Softmax regression over node-kind count features.

    Deterministic: zero init, fixed iteration count, full-batch
    updates. Prediction is a pure function of the trained weights.
    """

    def __init__(self, language: str, vocab: list[str], weights: np.ndarray,
                 mean: np.ndarray, std: np.ndarray):
        self.language = language
        self.vocab = vocab
        self.weights = weights  # (F+1, C)
        self.mean = mean
        self.std = std

    @classmethod
    def train(cls, units: list[SourceUnit], iterations: int = 300, lr: float = 0.5) -> "SurrogateVictim":
        labeled = [u for u in units if u.label_hint is not None]
        classes = sorted({u.label_hint for u in labeled})
        if len(classes) < 2:
            raise DegenerateLabelsError("surrogate victim needs >= 2 classes")
        if classes != list(range(len(classes))):
            raise DegenerateLabelsError("labels must be dense 0..C-1")
        language = labeled[0].language
        kind_counts = []
        vocab_set: set[str] = set()
        for unit in labeled:
            graph = parse_source(unit)
            counts: dict[str, int] = {}
            for kind in graph.kinds:
                counts[kind] = counts.get(kind, 0) + 1
            kind_counts.append(counts)
            vocab_set.update(counts)
        vocab = sorted(vocab_set)
        X = np.array([[c.get(k, 0) for k in vocab] for c in kind_counts], dtype=np.float64)
        y = np.array([u.label_hint for u in labeled], dtype=np.int64)
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        std[std < 1e-9] = 1.0
        Xn = np.hstack([(X - mean) / std, np.ones((len(X), 1))])
        C = len(classes)
        W = np.zeros((Xn.shape[1], C))
        onehot = np.eye(C)[y]
        for _ in range(iterations):
            logits = Xn @ W
            logits -= logits.max(axis=1, keepdims=True)
            probs = np.exp(logits)
            probs /= probs.sum(axis=1, keepdims=True)
            grad = Xn.T @ (probs - onehot) / len(Xn)
            W -= lr * grad
        return cls(language, vocab, W, mean, std)

    def _features(self, code: str) -> np.ndarray:
        graph = parse_source(SourceUnit("_probe", self.language, code))
        counts: dict[str, int] = {}
        for kind in graph.kinds:
            counts[kind] = counts.get(kind, 0) + 1
        x = np.array([counts.get(k, 0) for k in self.vocab], dtype=np.float64)
        xn = (x - self.mean) / self.std
        return np.append(xn, 1.0)

    def predict(self, code: str, context: str | None = None) -> VictimPrediction:
        x = self._features(code)
        if context:
            # pair tasks: the immutable side contributes its own features
            x = x + self._features(context)
        logits = x @ self.weights
        logits -= logits.max()
        probs = np.exp(logits)
        probs /= probs.sum()
        return VictimPrediction(tuple(float(p) for p in probs))

    def to_json(self) -> dict:
        return {
            "kind": "surrogate_victim",
            "language": self.language,
            "vocab": self.vocab,
            "weights": self.weights.tolist(),
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_json(cls, data: dict) -> "SurrogateVictim":
        return cls(
            language=data["language"],
            vocab=data["vocab"],
            weights=np.array(data["weights"], dtype=np.float64),
            mean=np.array(data["mean"], dtype=np.float64),
            std=np.array(data["std"], dtype=np.float64),
        )

    @classmethod
    def load(cls, path) -> "SurrogateVictim":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


# --- surrogate filler ---------------------------------------------------------

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_CONTEXT_LINES = 20
_LITERAL_POOL = ("0", "1", '""')
_NON_IDENTIFIERS = frozenset(["true", "false", "null", "NULL", "True", "False", "None", "MASK"])


class SurrogateFiller:
    """Fills masks with identifiers visible near the insertion point,
    falling back to a constant literal pool."""

    def __init__(self, language: str, seed: int = 0):
        self.language = language
        self.rng = Random(seed)

    def for_unit(self, seed: int) -> "SurrogateFiller":
        return SurrogateFiller(self.language, seed)

    def _pool(self, text: str, mask_pos: int) -> list[str]:
        window_start = mask_pos
        for _ in range(_CONTEXT_LINES):
            nl = text.rfind("\n", 0, window_start)
            if nl < 0:
                window_start = 0
                break
            window_start = nl
        context = text[window_start:mask_pos]
        keywords = _KEYWORDS.get(self.language, frozenset())
        seen: dict[str, int] = {}
        for match in _IDENT_RE.finditer(context):
            word = match.group(0)
            if word in keywords or word in _NON_IDENTIFIERS:
                continue
            seen[word] = match.start()  # later occurrence = closer to the mask
        idents = sorted(seen, key=lambda w: (-seen[w], w))
        return idents + list(_LITERAL_POOL)

    def fill(self, text: str, n: int) -> list[FillResult]:
        positions = [m.start() for m in re.finditer(re.escape(MASK), text)]
        if not positions:
            return [FillResult(texts=())]
        pools = [self._pool(text, pos) for pos in positions]
        results: list[FillResult] = []
        seen: set[tuple[str, ...]] = set()
        for i in range(max(1, n)):
            if i == 0:
                texts = tuple(pool[0] for pool in pools)
            else:
                texts = tuple(self.rng.choice(pool) for pool in pools)
            if texts not in seen:
                seen.add(texts)
                results.append(FillResult(texts=texts))
        return results


def substitute_masks(text: str, texts: tuple[str, ...]) -> str:
    """Replace each `<MASK>` occurrence, in order, with the given fills."""
    parts = text.split(MASK)
    if len(parts) - 1 != len(texts):
        raise MalformedResponseError(
            f"fill count {len(texts)} != mask count {len(parts) - 1}"
        )
    out = [parts[0]]
    for fill, tail in zip(texts, parts[1:]):
        out.append(fill)
        out.append(tail)
    return "".join(out)


# --- HTTP clients ---------------------------------------------------------------


class _HttpBase:
    def __init__(self, endpoint: str, language: str, timeout: float = 30.0, max_inflight: int = 4):
        self.endpoint = endpoint.rstrip("/")
        self.language = language
        self._semaphore = threading.Semaphore(max_inflight)
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(TOKEN_ENV)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        self._client = httpx.Client(timeout=timeout, headers=headers)

    def _post(self, path: str, body: dict, parse) -> object:
        """POST with two retries on both unavailability and malformed
        responses; `parse` validates the payload and may raise
        MalformedResponseError to trigger a retry."""
        content = json.dumps(body, sort_keys=True, separators=(",", ":")).encode("utf-8")
        last_error: Exception | None = None
        for _ in range(3):  # first try plus two retries
            try:
                with self._semaphore:
                    response = self._client.post(self.endpoint + path, content=content)
            except httpx.HTTPError as exc:
                last_error = ClientUnavailableError(str(exc))
                continue
            if response.status_code == 503:
                last_error = ClientUnavailableError(f"{path} returned 503")
                continue
            if response.status_code != 200:
                last_error = MalformedResponseError(f"{path} returned {response.status_code}")
                continue
            try:
                return parse(response.json())
            except (ValueError, MalformedResponseError) as exc:
                if isinstance(exc, MalformedResponseError):
                    last_error = exc
                else:
                    last_error = MalformedResponseError(f"non-JSON body from {path}: {exc}")
                continue
        raise last_error

    def close(self) -> None:
        self._client.close()


class HttpVictim(_HttpBase):
    def predict(self, code: str, context: str | None = None) -> VictimPrediction:
        def parse(data) -> VictimPrediction:
            if not isinstance(data, dict) or not isinstance(data.get("probs"), list):
                raise MalformedResponseError("predict response missing probs")
            try:
                return VictimPrediction(tuple(float(p) for p in data["probs"]))
            except (TypeError, ValueError) as exc:
                raise MalformedResponseError(f"bad probability vector: {exc}") from exc

        return self._post("/predict", {"code": code, "context": context, "language": self.language}, parse)


class HttpFiller(_HttpBase):
    def fill(self, text: str, n: int) -> list[FillResult]:
        mask_count = text.count(MASK)

        def parse(data) -> list[FillResult]:
            if not isinstance(data, dict) or not isinstance(data.get("fills"), list):
                raise MalformedResponseError("fill response missing fills")
            results = []
            for candidate in data["fills"][:n]:
                if not isinstance(candidate, list) or len(candidate) != mask_count:
                    raise MalformedResponseError("per-mask fill list has wrong arity")
                if any(not isinstance(t, str) or MASK in t for t in candidate):
                    raise MalformedResponseError("fill text invalid or still masked")
                results.append(FillResult(texts=tuple(candidate)))
            return results

        return self._post("/fill", {"text": text, "n": n, "language": self.language}, parse)
