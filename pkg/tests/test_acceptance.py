"""Acceptance suite: one test per criterion, each printing a PASS line
with its measured numbers. Run with `pytest tests/test_acceptance.py -v -s`.
"""

import json
import time
from random import Random

import pytest

from astveil import engine
from astveil.clients import SurrogateFiller, SurrogateVictim, VictimPrediction
from astveil.cli import Config, cmd_attack, cmd_mine, cmd_probe, write_corpus
from astveil.engine import AttackConfig, AttackPattern, AttackReport, attack, augment_corpus, is_dead_guarded, summarize
from astveil.graphs import SourceUnit, extract_statements, has_parse_error, parse_source
from astveil.metamodel import FeatureVector, MetaModel, prob_change, train_meta
from astveil.mining import ProbeCorpus, ProbeRecord, cork_quality, cork_term, enumerate_frequent, greedy_select
from astveil.patterns import Pattern
from astveil.synthesis import pattern_to_template
from conftest import parse
from fixture_corpus import make_corpus
from oracles import brute_force_contains, brute_force_frequent, random_pattern, random_tree_graph

LABELS = ["a", "b", "c", "d"]


def report_line(name: str, detail: str) -> None:
    print(f"\nACCEPTANCE {name}: PASS ({detail})")


class TestMiningOracleEquivalence:
    def test_criterion(self):
        rng = Random(1234)
        started = time.monotonic()
        datasets = 0
        for _ in range(200):
            graphs = [random_tree_graph(rng, 8, LABELS) for _ in range(rng.randint(2, 10))]
            min_support = rng.choice([2, 3])
            max_edges = rng.randint(0, 3)
            mined = {p.canonical_code for p in enumerate_frequent(graphs, min_support, max_edges)}
            oracle = brute_force_frequent(graphs, min_support, max_edges)
            assert mined == oracle
            datasets += 1
        elapsed = time.monotonic() - started
        assert datasets == 200
        assert elapsed < 60.0
        report_line("mining-oracle-equivalence", f"200/200 datasets set-equal in {elapsed:.1f}s")


class TestQualityCriterionExactness:
    def test_criterion(self):
        rng = Random(77)
        combos = 0
        for _ in range(100):
            pos = [random_tree_graph(rng, 8, LABELS) for _ in range(rng.randint(1, 6))]
            neg = [random_tree_graph(rng, 8, LABELS) for _ in range(rng.randint(1, 6))]
            pats = [random_pattern(rng, 3, LABELS) for _ in range(rng.randint(0, 4))]
            direct = 0
            for p in pats:
                pos_with = sum(1 for g in pos if brute_force_contains(g, p))
                neg_with = sum(1 for g in neg if brute_force_contains(g, p))
                direct -= (len(neg) - neg_with) * (len(pos) - pos_with) + neg_with * pos_with
            assert cork_quality(pats, pos, neg) == direct
            combos += 1

        # hand case: positives={C}, negatives={A,B}, P in A and C only -> q = -1
        def chain(*kinds):
            from astveil.graphs import AstGraph

            g = AstGraph()
            prev = g.add_node(kinds[0], (0, 0), -1, "")
            for k in kinds[1:]:
                prev = g.add_node(k, (0, 0), prev, "child")
            return g

        A, B, C = chain("p", "x"), chain("q"), chain("p", "y")
        assert cork_quality([Pattern.single("p")], positives=[C], negatives=[A, B]) == -1
        assert cork_quality([], [A], [B]) == 0
        report_line("quality-criterion-exactness", f"{combos}/100 random combos exact; hand case -1; empty-set 0")


class TestGreedySelectionProperty:
    def test_criterion(self):
        rng = Random(4096)
        runs = 0
        for _ in range(100):
            pos = [random_tree_graph(rng, 7, LABELS) for _ in range(rng.randint(2, 6))]
            neg = [random_tree_graph(rng, 7, LABELS) for _ in range(rng.randint(2, 6))]
            cands = list({random_pattern(rng, 3, LABELS) for _ in range(rng.randint(2, 8))})
            k = rng.randint(1, len(cands))
            out = greedy_select(cands, pos, neg, k, exclude_content_singletons=False)
            terms = {p.canonical_code: cork_term(p, pos, neg) for p in cands}
            unselected = [p for p in cands if p not in out.patterns]
            for sel in out.patterns:
                for uns in unselected:
                    assert (terms[sel.canonical_code], sel.canonical_code) <= (
                        terms[uns.canonical_code],
                        uns.canonical_code,
                    )
            runs += 1
        report_line("greedy-selection-property", f"{runs}/100 runs dominance-ordered")


class TestHandCases:
    def test_criterion(self):
        class ConstantVictim:
            def predict(self, code, context=None):
                return VictimPrediction((0.7, 0.3))

        u, g = parse("python", "a=1\nb=2\nc=3\n")
        stmts = extract_statements(g, u)
        scores = engine.importance_scores(u, stmts, ConstantVictim(), 0)
        assert len(scores) == 3
        assert all(abs(delta) <= 1e-12 for _, delta in scores)

        meta = MetaModel(
            root={
                "split": 0,
                "absent": {"leaf": {"class": 0, "support": 40, "counts": [40, 0]}},
                "present": {"leaf": {"class": 1, "support": 60, "counts": [0, 60]}},
            },
            n=100, num_classes=2, num_features=1, pattern_set_id="h",
            pattern_class_counts=[[0, 60]],
        )
        assert abs(prob_change(meta, FeatureVector((0,)), 0, 0) - 0.6) <= 1e-12
        assert abs(prob_change(meta, FeatureVector((0,)), 0, 1) - 0.0) <= 1e-12
        report_line("importance-and-flip-probability-hand-cases", "constant-victim deltas 0; prob_change 0.6 and 0 exact")


@pytest.fixture(scope="module")
def surrogate_run(tmp_path_factory):
    """Probe -> mine -> attack over a 200-unit fixture, recording every
    candidate the engine emits."""
    root = tmp_path_factory.mktemp("acceptance")
    train_units = make_corpus(seed=3001, n_per_class=100, prefix="t")
    attack_units = [u for u in make_corpus(seed=3002, n_per_class=200, prefix="a") if u.label_hint == 0][:200]
    write_corpus(root / "corpus", train_units, ".c")
    write_corpus(root / "attack_corpus", attack_units, ".c")
    out = root / "out"
    out.mkdir()
    victim = SurrogateVictim.train(train_units)
    victim.save(out / "victim.json")
    (root / "config.json").write_text(json.dumps({
        "language": "c",
        "corpus": "corpus",
        "attack_corpus": "attack_corpus",
        "output_dir": "out",
        "seed": 11,
        "victim": {"mode": "surrogate", "model_path": "victim.json"},
        "filler": {"mode": "surrogate"},
        "mining": {"max_edges": 3, "k": 10, "min_support": 10},
        "attack": {"max_queries": 300, "max_steps": 10},
    }))
    config = Config.from_file(str(root / "config.json"))

    emitted = []
    original_fill = engine.fill_masks

    def recording_fill(masked, filler, **kw):
        out_candidates = original_fill(masked, filler, **kw)
        emitted.extend(out_candidates)
        return out_candidates

    engine.fill_masks = recording_fill
    started = time.monotonic()
    try:
        assert cmd_probe(config) == 0
        assert cmd_mine(config) == 0
        assert cmd_attack(config) == 0
    finally:
        engine.fill_masks = original_fill
    elapsed = time.monotonic() - started

    reports = engine.load_reports(out / "reports.jsonl")
    summary = json.loads((out / "summary.json").read_text())
    originals = {u.id: u.text for u in attack_units}
    return {
        "reports": reports,
        "summary": summary,
        "emitted": emitted,
        "elapsed": elapsed,
        "originals": originals,
    }


class TestEndToEndSurrogateAttack:
    def test_criterion(self, surrogate_run):
        summary = surrogate_run["summary"]["summary"]
        assert summary["attempted"] == 200
        assert summary["asr"] >= 0.9
        assert all(r.queries_used <= 300 for r in surrogate_run["reports"])
        assert surrogate_run["elapsed"] < 300.0
        report_line(
            "end-to-end-surrogate-attack",
            f"ASR={summary['asr']:.3f} over 200 units, max queries "
            f"{max(r.queries_used for r in surrogate_run['reports'])}, "
            f"{surrogate_run['elapsed']:.0f}s total",
        )


class TestSemanticsPreservationStructure:
    def test_criterion(self, surrogate_run):
        emitted = surrogate_run["emitted"]
        assert emitted, "surrogate run must emit candidates"
        clean = 0
        for cand in emitted:
            graph = parse_source(SourceUnit("_cand", "c", cand.text))
            assert not has_parse_error(graph)
            assert is_dead_guarded(cand.text, cand.insertion_span, "c")
            clean += 1
        restored = 0
        for r in surrogate_run["reports"]:
            text = r.final_text
            for edit in sorted(r.edits, key=lambda e: -e.step):
                s, e = edit.insertion_span
                text = text[:s] + text[e:]
            assert text == surrogate_run["originals"][r.unit_id]
            restored += 1
        report_line(
            "semantics-preservation-structure",
            f"{clean}/{len(emitted)} candidates parse-clean and false-guarded; "
            f"{restored} reports byte-restore",
        )


class TestBudgetLimitExactness:
    def test_criterion(self):
        defaults = AttackConfig()
        assert (defaults.max_queries, defaults.timeout_s, defaults.max_steps, defaults.fill_retries) == (
            2000, 100.0, 10, 5,
        )

        class NeverFlip:
            def __init__(self):
                self.calls = 0

            def predict(self, code, context=None):
                self.calls += 1
                return VictimPrediction((0.8, 0.2))

        class SlowStub(NeverFlip):
            def predict(self, code, context=None):
                time.sleep(0.03)
                return super().predict(code, context)

        host = SourceUnit(
            "tmpl", "c",
            "int host() {\n"
            "    int seed = 1;\n"
            "    if (seed > 0) { seed = 2; }\n"
            "    if (seed > 1) { int q = 3; }\n"
            "    if (seed > 2) { return seed; }\n"
            "    while (seed > 0) { seed = seed - 1; }\n"
            "    while (seed > 1) { int w = 4; }\n"
            "    while (seed > 2) { return seed; }\n"
            "    do { seed = seed + 1; } while (seed < 3);\n"
            "    do { int e = 5; } while (seed < 4);\n"
            "    for (seed = 0; seed < 5; seed = seed + 1) { seed = seed + 2; }\n"
            "    for (seed = 0; seed < 6; seed = seed + 1) { int r = 6; }\n"
            "    return seed;\n"
            "}\n",
        )
        corpus = ProbeCorpus(records=[ProbeRecord(host, parse_source(host), 1)], num_classes=2)
        body_kind = {"if": "consequence", "while": "body", "do": "body", "for": "body"}
        shapes = [
            ("if", "expression_statement"), ("if", "declaration"), ("if", "return_statement"),
            ("while", "expression_statement"), ("while", "declaration"), ("while", "return_statement"),
            ("do", "expression_statement"), ("do", "declaration"),
            ("for", "expression_statement"), ("for", "declaration"),
        ]
        patterns = []
        for root, inner in shapes:
            pattern = Pattern.from_tree(
                (f"{root}_statement",
                 [(body_kind[root], ("compound_statement", [("child", inner)]))])
            )
            patterns.append(AttackPattern(pattern=pattern, template=pattern_to_template(pattern, corpus)))
        k = len(patterns)
        features = [FeatureVector((0,) * k)] * 5 + [FeatureVector((1,) * k)] * 5
        meta = train_meta(features, [0] * 5 + [1] * 5)

        # budget_exhausted under the default 2000-query budget: a unit with
        # enough statements that statement scoring dominates each step
        # (token_limit raised so the pinned 2000/100/10/5 defaults drive it)
        big_lines = [f"    int v{i} = {i};" for i in range(220)]
        big_unit = SourceUnit("big", "c", "int f() {\n" + "\n".join(big_lines) + "\n    return v0;\n}\n")
        stub = NeverFlip()
        budget_config = AttackConfig(token_limit=100000)
        report = attack(big_unit, stub, SurrogateFiller("c", 0), patterns, meta, budget_config)
        assert report.outcome == "budget_exhausted"
        assert report.queries_used == 2000 == stub.calls

        small_unit = SourceUnit(
            "small", "c", "int f() {\n    int a = 1;\n    int b = 2;\n    return a + b;\n}\n"
        )
        stub2 = NeverFlip()
        report2 = attack(small_unit, stub2, SurrogateFiller("c", 0), patterns, meta, defaults)
        assert report2.outcome in ("steps_exhausted", "no_candidates")
        assert len(report2.edits) <= 10
        assert report2.queries_used == stub2.calls

        stub3 = SlowStub()
        report3 = attack(small_unit, stub3, SurrogateFiller("c", 0), patterns, meta,
                         AttackConfig(timeout_s=0.1))
        assert report3.outcome == "timeout"
        assert report3.queries_used == stub3.calls

        # zero-budget edge case
        stub4 = NeverFlip()
        report4 = attack(small_unit, stub4, SurrogateFiller("c", 0), patterns, meta,
                         AttackConfig(max_queries=0))
        assert report4.outcome == "budget_exhausted"
        assert report4.queries_used == 0 == stub4.calls
        report_line(
            "budget-limit-exactness",
            f"budget 2000=={stub.calls}, steps<=10 ({len(report2.edits)} edits, "
            f"{stub2.calls} queries), timeout {stub3.calls} queries, zero-budget 0",
        )


class TestMetricsArithmetic:
    def test_criterion(self):
        def rep(n_i, n_t):
            return AttackReport(
                unit_id="u", outcome="success", original_class=0, final_class=1,
                queries_used=1, elapsed_s=0.0, edits=[], n_i=n_i, n_t=n_t,
            )

        s = summarize([rep(50, 200), rep(150, 300)])
        assert s.mu_tc == 100.0
        assert s.sigma_tc == 50.0
        assert s.mu_tcr == pytest.approx(0.375, abs=0)
        report_line("metrics-arithmetic", "mu_TC=100, sigma_TC=50, mu_TCR=0.375 exact")


class TestAugmentationProtocol:
    def test_criterion(self):
        rng = Random(600)
        units = []
        for i in range(10000):
            name = ["alpha", "beta", "gamma", "delta"][i % 4]
            units.append(
                SourceUnit(
                    f"g{i:05d}", "c",
                    f"int fn{i}() {{\n    int {name} = {rng.randint(0, 99)};\n    return {name};\n}}\n",
                    label_hint=i % 2,
                )
            )
        host = SourceUnit("tmpl", "c", "int t() {\n    if (m > 0) { m = 2; }\n}\n")
        corpus = ProbeCorpus(records=[ProbeRecord(host, parse_source(host), 1)], num_classes=2)
        pattern = Pattern.from_tree(
            ("if_statement", [("consequence", ("compound_statement", [("child", "expression_statement")]))])
        )
        patterns = [AttackPattern(pattern=pattern, template=pattern_to_template(pattern, corpus))]
        results = augment_corpus(units, patterns, SurrogateFiller("c", 0), p=0.5, max_perturb=5, seed=99)
        fraction = sum(1 for r in results if r.perturbed) / len(results)
        assert 0.48 <= fraction <= 0.52
        sampled = Random(1).sample([r for r in results if r.perturbed], 500)
        for r in results:
            if r.perturbed:
                assert 1 <= r.insertions <= 5
                assert r.unit.label_hint is not None
        for r in sampled:
            assert not has_parse_error(parse_source(r.unit))
        report_line(
            "augmentation-protocol",
            f"perturbed fraction {fraction:.4f} in [0.48, 0.52]; insertions in 1..5; "
            "500-sample reparse sweep clean",
        )


class TestFullScaleNonReproduction:
    def test_criterion(self):
        """Full-scale attack-success results against real pretrained code
        models require GPU-scale transformer checkpoints and are out of
        desk-scale scope; this suite substitutes oracle equivalence and
        invariant checks, and runs with no bridge component present."""
        import astveil

        bridge_free = [m for m in list(vars(astveil)) if "bridge" in m.lower()]
        assert not bridge_free
        # the package must import and the full pipeline must run without any
        # HTTP service: the surrogate-mode runs above already prove it, and
        # the client module only contacts a network when explicitly configured
        report_line(
            "full-scale-non-reproduction",
            "full-scale ASR claims not asserted at desk scale; suite "
            "runs with no bridge component",
        )
