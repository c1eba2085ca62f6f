"""Greedy black-box attack loop, augmentation, and attack metrics.

Each greedy step scores statements by the probability drop their
removal causes, picks the meta-model's best missing pattern, splices
the guarded template after the chosen statement, fills its masks, and
queries the victim per parseable candidate, accepting the one that
most reduces confidence in the original class. Every victim call
counts against the query budget; the wall clock is checked between
queries.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from random import Random

from .clients import MASK, substitute_masks
from .errors import IndentationUnresolvableError
from .graphs import (
    SourceUnit,
    extract_statements,
    has_parse_error,
    parse_source,
    remove_statement,
    token_count,
)
from .grammar import guard_table, statement_kinds
from .matching import contains_pattern
from .metamodel import FeatureVector, MetaModel, rank_missing
from .patterns import Pattern
from .synthesis import MaskedSource, MaskedTemplate, apply_semantics_guard, render_insertion

OUTCOMES = ("success", "budget_exhausted", "timeout", "steps_exhausted", "token_limit", "no_candidates")


@dataclass(frozen=True)
class AttackConfig:
    max_queries: int = 2000
    timeout_s: float = 100.0
    max_steps: int = 10
    fill_retries: int = 5
    token_limit: int = 512
    fills_per_step: int = 3
    target_class_policy: str = "original_prediction"

    def __post_init__(self):
        for name in ("max_queries", "max_steps", "fill_retries", "token_limit", "fills_per_step"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class AttackPattern:
    """A mined pattern with its precomputed, unguarded template."""

    pattern: Pattern
    template: MaskedTemplate


@dataclass
class Edit:
    step: int
    statement_span: tuple[int, int]
    pattern_id: str
    filled_text: str
    insertion_span: tuple[int, int]  # kept in final-text coordinates

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "statement_span": list(self.statement_span),
            "pattern_id": self.pattern_id,
            "filled_text": self.filled_text,
            "insertion_span": list(self.insertion_span),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Edit":
        return cls(
            step=data["step"],
            statement_span=tuple(data["statement_span"]),
            pattern_id=data["pattern_id"],
            filled_text=data["filled_text"],
            insertion_span=tuple(data["insertion_span"]),
        )


@dataclass
class AttackReport:
    unit_id: str
    outcome: str
    original_class: int
    final_class: int
    queries_used: int
    elapsed_s: float
    edits: list[Edit] = field(default_factory=list)
    n_i: int = 0
    n_t: int = 0
    final_text: str = ""

    @property
    def change_rate(self) -> float:
        return self.n_i / self.n_t if self.n_t else 0.0

    def to_json(self, stable: bool = False) -> dict:
        """JSON record; `stable` nulls the wall-clock field so persisted
        artifacts are byte-identical across reruns."""
        return {
            "unit_id": self.unit_id,
            "outcome": self.outcome,
            "original_class": self.original_class,
            "final_class": self.final_class,
            "queries_used": self.queries_used,
            "elapsed_s": None if stable else round(self.elapsed_s, 6),
            "edits": [e.to_json() for e in self.edits],
            "n_i": self.n_i,
            "n_t": self.n_t,
            "change_rate": self.change_rate,
            "final_text": self.final_text,
        }

    @classmethod
    def from_json(cls, data: dict) -> "AttackReport":
        return cls(
            unit_id=data["unit_id"],
            outcome=data["outcome"],
            original_class=data["original_class"],
            final_class=data["final_class"],
            queries_used=data["queries_used"],
            elapsed_s=data["elapsed_s"] or 0.0,
            edits=[Edit.from_json(e) for e in data["edits"]],
            n_i=data["n_i"],
            n_t=data["n_t"],
            final_text=data.get("final_text", ""),
        )


@dataclass
class MetricsSummary:
    attempted: int
    successes: int
    asr: float | None  # None when nothing was attempted
    mu_tc: float | None = None
    sigma_tc: float | None = None
    mu_tcr: float | None = None
    sigma_tcr: float | None = None

    def to_json(self) -> dict:
        return {
            "attempted": self.attempted,
            "successes": self.successes,
            "asr": self.asr,
            "mu_tc": self.mu_tc,
            "sigma_tc": self.sigma_tc,
            "mu_tcr": self.mu_tcr,
            "sigma_tcr": self.sigma_tcr,
        }


@dataclass(frozen=True)
class CandidateSource:
    text: str
    insertion_span: tuple[int, int]
    fills: tuple[str, ...]


class _BudgetExceeded(Exception):
    pass


class _TimedOut(Exception):
    pass


def derive_seed(seed: int, unit_id: str) -> int:
    digest = hashlib.sha256(f"{seed}:{unit_id}".encode()).hexdigest()
    return int(digest[:12], 16)


def importance_scores(unit: SourceUnit, statements, victim, c_t: int, predict=None, context=None):
    """Probability drop for removing each statement; Skip removals are
    omitted. Consumes 1 + |scored| victim queries."""
    if predict is None:
        predict = lambda code: victim.predict(code, context)  # noqa: E731
    base = predict(unit.text).probs[c_t]
    scores = []
    for stmt in statements:
        reduced = remove_statement(unit, stmt)
        if reduced is None:
            continue
        scores.append((stmt, base - predict(reduced.text).probs[c_t]))
    return scores


def fill_masks(masked: MaskedSource, filler, retries: int = 5, language: str = "c",
               n: int = 3, unit_id: str = "_") -> list[CandidateSource]:
    """Fill mask slots and keep only candidates that reparse cleanly and
    whose inserted region stays dominated by its constant-false guard
    (a fill that swallows following code into the dead branch would
    otherwise change semantics while still parsing).

    One filler invocation per attempt; after `retries` attempts with no
    valid candidate the insertion is discarded (empty list)."""
    s, e = masked.insertion_span

    def validate(text: str, span: tuple[int, int]) -> bool:
        graph = parse_source(SourceUnit(unit_id, language, text))
        if has_parse_error(graph):
            return False
        return _span_is_dead(graph, text, span, language)

    if masked.mask_count() == 0:
        if validate(masked.text, masked.insertion_span):
            return [CandidateSource(masked.text, masked.insertion_span, ())]
        return []
    for _ in range(max(1, retries)):
        results = filler.fill(masked.text, n)
        valid: list[CandidateSource] = []
        seen: set[str] = set()
        for result in results:
            text = substitute_masks(masked.text, result.texts)
            delta = sum(len(t) - len(MASK) for t in result.texts)
            span = (s, e + delta)
            if text in seen or not validate(text, span):
                continue
            seen.add(text)
            valid.append(CandidateSource(text, span, result.texts))
        if valid:
            return valid
    return []


def _shift_spans(edits: list[Edit], point: int, length: int) -> None:
    for edit in edits:
        s, e = edit.insertion_span
        if point <= s:
            edit.insertion_span = (s + length, e + length)
        elif point < e:  # nested inside an earlier insertion
            edit.insertion_span = (s, e + length)


def attack(unit: SourceUnit, victim, filler, patterns: list[AttackPattern],
           meta: MetaModel, config: AttackConfig, seed: int = 0,
           context: str | None = None) -> AttackReport:
    """Run the greedy attack on one unit until the prediction flips or a
    budget, step, token, or wall-clock limit triggers."""
    start = time.monotonic()
    state = {"queries": 0}

    def predict(code: str):
        if time.monotonic() - start > config.timeout_s:
            raise _TimedOut()
        if state["queries"] >= config.max_queries:
            raise _BudgetExceeded()
        result = victim.predict(code, context)
        state["queries"] += 1
        return result

    def report(outcome: str, original: int, final: int, edits: list[Edit], text: str) -> AttackReport:
        n_t = token_count(unit.text, unit.language)
        n_i = sum(token_count(text[s:e], unit.language) for s, e in (ed.insertion_span for ed in edits))
        return AttackReport(
            unit_id=unit.id,
            outcome=outcome,
            original_class=original,
            final_class=final,
            queries_used=state["queries"],
            elapsed_s=time.monotonic() - start,
            edits=edits,
            n_i=n_i,
            n_t=n_t,
            final_text=text,
        )

    unit_filler = filler.for_unit(derive_seed(seed, unit.id)) if hasattr(filler, "for_unit") else filler
    edits: list[Edit] = []
    current_text = unit.text
    used_pairs: set[tuple[str, str]] = set()  # (statement text, pattern id), excluded after use

    try:
        first = predict(unit.text)
    except _BudgetExceeded:
        return report("budget_exhausted", -1, -1, [], unit.text)
    except _TimedOut:
        return report("timeout", -1, -1, [], unit.text)

    c_t = first.predicted
    pattern_objs = [ap.pattern for ap in patterns]

    try:
        for step in range(1, config.max_steps + 1):
            cur_unit = SourceUnit(unit.id, unit.language, current_text)
            graph = parse_source(cur_unit)
            statements = extract_statements(graph, cur_unit)
            if not statements:
                return report("no_candidates", c_t, c_t, edits, current_text)
            scored = importance_scores(cur_unit, statements, victim, c_t, predict=predict)
            scored.sort(key=lambda item: (-item[1], item[0].span[0], item[0].node_id))
            feature = FeatureVector(tuple(1 if contains_pattern(graph, p) else 0 for p in pattern_objs))
            ranked = rank_missing(meta, feature, c_t)

            chosen = None
            for stmt, _delta in scored:
                stmt_text = current_text[stmt.span[0]:stmt.span[1]]
                for pidx in ranked:
                    ap = patterns[pidx]
                    key = (stmt_text, ap.pattern.pattern_id)
                    if key in used_pairs:
                        continue
                    guarded = apply_semantics_guard(ap.template)
                    try:
                        masked = render_insertion(cur_unit, stmt, guarded, graph=graph)
                    except IndentationUnresolvableError:
                        break  # host statement unusable for any pattern
                    candidates = fill_masks(
                        masked, unit_filler, retries=config.fill_retries,
                        language=unit.language, n=config.fills_per_step, unit_id=unit.id,
                    )
                    if not candidates:
                        used_pairs.add(key)
                        continue
                    chosen = (stmt, ap, candidates, key)
                    break
                if chosen:
                    break
            if chosen is None:
                return report("no_candidates", c_t, c_t, edits, current_text)

            stmt, ap, candidates, key = chosen
            used_pairs.add(key)
            best_text = None
            best_span = None
            best_conf = math.inf
            best_pred = None
            saw_overlong = False
            flipped = False
            for cand in candidates:
                if token_count(cand.text, unit.language) > config.token_limit:
                    saw_overlong = True
                    continue
                result = predict(cand.text)
                conf = result.probs[c_t]
                if result.predicted != c_t:
                    best_text, best_span, best_conf, best_pred = cand.text, cand.insertion_span, conf, result
                    flipped = True
                    break
                if conf < best_conf:
                    best_text, best_span, best_conf, best_pred = cand.text, cand.insertion_span, conf, result

            if best_text is None:
                if saw_overlong:
                    return report("token_limit", c_t, c_t, edits, current_text)
                return report("no_candidates", c_t, c_t, edits, current_text)

            point, new_end = best_span
            _shift_spans(edits, point, new_end - point)
            edits.append(
                Edit(
                    step=step,
                    statement_span=stmt.span,
                    pattern_id=ap.pattern.pattern_id,
                    filled_text=best_text[point:new_end],
                    insertion_span=best_span,
                )
            )
            current_text = best_text
            if flipped:
                return report("success", c_t, best_pred.predicted, edits, current_text)
        return report("steps_exhausted", c_t, c_t, edits, current_text)
    except _BudgetExceeded:
        return report("budget_exhausted", c_t, c_t, edits, current_text)
    except _TimedOut:
        return report("timeout", c_t, c_t, edits, current_text)


def summarize(reports: list[AttackReport]) -> MetricsSummary:
    attempted = len(reports)
    wins = [r for r in reports if r.outcome == "success"]
    asr = len(wins) / attempted if attempted else None
    if not wins:
        return MetricsSummary(attempted=attempted, successes=0, asr=asr)

    def mean(xs):
        return sum(xs) / len(xs)

    def pstdev(xs):
        mu = mean(xs)
        return math.sqrt(mean([(x - mu) ** 2 for x in xs]))

    tc = [float(r.n_i) for r in wins]
    tcr = [r.change_rate for r in wins]
    return MetricsSummary(
        attempted=attempted,
        successes=len(wins),
        asr=asr,
        mu_tc=mean(tc),
        sigma_tc=pstdev(tc),
        mu_tcr=mean(tcr),
        sigma_tcr=pstdev(tcr),
    )


def pattern_frequency(reports: list[AttackReport]) -> list[tuple[str, float]]:
    """Per pattern, the fraction of successful attacks whose edits used
    it (presence per report, not multiplicity); the dead-code wrapper
    itself is not a pattern and is never counted."""
    wins = [r for r in reports if r.outcome == "success"]
    if not wins:
        return []
    counts: dict[str, int] = {}
    for r in wins:
        for pid in {e.pattern_id for e in r.edits}:
            counts[pid] = counts.get(pid, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [(pid, c / len(wins)) for pid, c in ranked]


@dataclass
class AugmentedUnit:
    unit: SourceUnit
    perturbed: bool
    insertions: int


def augment_corpus(units: list[SourceUnit], patterns: list[AttackPattern], filler,
                   p: float = 0.5, max_perturb: int = 5, seed: int = 0,
                   fill_retries: int = 5) -> list[AugmentedUnit]:
    """Randomly insert guarded, filled patterns for adversarial
    retraining. Each unit keeps its label; with probability p it gets
    1..max_perturb insertions, each re-validated by reparse; units
    whose insertions all fail pass through unperturbed."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    out: list[AugmentedUnit] = []
    for unit in units:
        rng = Random(derive_seed(seed, unit.id))
        if rng.random() >= p or not patterns:
            out.append(AugmentedUnit(unit=unit, perturbed=False, insertions=0))
            continue
        target = rng.randint(1, max_perturb)
        current = unit.text
        done = 0
        unit_filler = filler.for_unit(derive_seed(seed + 1, unit.id)) if hasattr(filler, "for_unit") else filler
        for _ in range(target):
            inserted = False
            for _attempt in range(4):
                cur_unit = SourceUnit(unit.id, unit.language, current)
                graph = parse_source(cur_unit)
                statements = extract_statements(graph, cur_unit)
                if not statements:
                    break
                stmt = rng.choice(statements)
                ap = rng.choice(patterns)
                guarded = apply_semantics_guard(ap.template)
                try:
                    masked = render_insertion(cur_unit, stmt, guarded, graph=graph)
                except IndentationUnresolvableError:
                    continue
                candidates = fill_masks(
                    masked, unit_filler, retries=fill_retries,
                    language=unit.language, n=1, unit_id=unit.id,
                )
                if not candidates:
                    continue
                current = candidates[0].text
                done += 1
                inserted = True
                break
            if not inserted:
                break
        perturbed = done > 0
        new_unit = SourceUnit(unit.id, unit.language, current if perturbed else unit.text, unit.label_hint)
        out.append(AugmentedUnit(unit=new_unit, perturbed=perturbed, insertions=done))
    return out


def _span_is_dead(graph, text: str, span: tuple[int, int], language: str) -> bool:
    guards = guard_table(language)
    stmt_kinds = statement_kinds(language)
    s, e = span
    tops = []
    for nid in range(len(graph)):
        ns, ne = graph.spans[nid]
        if ns < s or ne > e or ns >= ne:
            continue
        parent = graph.parents[nid]
        if parent >= 0:
            ps, pe = graph.spans[parent]
            if ps >= s and pe <= e:
                continue  # parent also inside: not top-level
        if graph.kinds[nid] in stmt_kinds:
            tops.append(nid)
    if not tops:
        return False
    false_literal = guards["false_literal"]
    for nid in tops:
        if graph.kinds[nid] not in guards["conditional_kinds"]:
            return False
        condition = None
        for child in graph.children[nid]:
            if graph.edge_labels[child] == "condition":
                cs, ce = graph.spans[child]
                condition = text[cs:ce]
                break
        if condition is None or not condition.lstrip().startswith(false_literal):
            return False
    return True


def is_dead_guarded(text: str, span: tuple[int, int], language: str) -> bool:
    """Structural dead-code check: every top-level statement inside the
    inserted span is a conditional whose condition text starts with the
    language's false literal."""
    return _span_is_dead(parse_source(SourceUnit("_check", language, text)), text, span, language)


def save_reports(path, reports: list[AttackReport]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in reports:
            fh.write(json.dumps(r.to_json(stable=True), sort_keys=True) + "\n")


def load_reports(path) -> list[AttackReport]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(AttackReport.from_json(json.loads(line)))
    return out
