"""Command-line orchestration: probe, mine, attack, augment, report.

All commands are deterministic given identical inputs and seed in
surrogate mode; artifacts are written with sorted keys and sorted unit
order so reruns are byte-identical.
"""

from __future__ import annotations

import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import click

from . import engine, metamodel, mining, synthesis
from .clients import HttpFiller, HttpVictim, SurrogateFiller, SurrogateVictim
from .engine import AttackConfig, AttackPattern
from .errors import ClientUnavailableError, ConfigError
from .graphs import SourceUnit, parse_source, truncate_graph
from .mining import ProbeCorpus, ProbeRecord

log = logging.getLogger("astveil")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_UNAVAILABLE = 2


@dataclass
class MiningParams:
    min_support: int | None = None
    max_edges: int = 5
    k: int = 20
    max_nodes: int = 400
    template_instance: int = 0  # 0..4: which corpus instance renders the template


@dataclass
class Config:
    language: str
    corpus: Path
    output_dir: Path
    attack_corpus: Path | None = None
    seed: int = 0
    workers: int = 1
    victim: dict = field(default_factory=lambda: {"mode": "surrogate", "model_path": "victim.json"})
    filler: dict = field(default_factory=lambda: {"mode": "surrogate"})
    mining: MiningParams = field(default_factory=MiningParams)
    attack: AttackConfig = field(default_factory=AttackConfig)
    require_label_match: bool = False
    augment_p: float = 0.5
    augment_max_perturb: int = 5

    @classmethod
    def from_file(cls, path: str, overrides: dict | None = None) -> "Config":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        raw.update(overrides or {})
        base = Path(path).parent
        try:
            attack_raw = dict(raw.get("attack", {}))
            require = bool(attack_raw.pop("require_label_match", raw.get("require_label_match", False)))
            augment_raw = raw.get("augment", {})
            cfg = cls(
                language=raw["language"],
                corpus=(base / raw["corpus"]).resolve(),
                output_dir=(base / raw.get("output_dir", "out")).resolve(),
                attack_corpus=(base / raw["attack_corpus"]).resolve() if raw.get("attack_corpus") else None,
                seed=int(raw.get("seed", 0)),
                workers=int(raw.get("workers", 1)),
                victim=raw.get("victim", {"mode": "surrogate", "model_path": "victim.json"}),
                filler=raw.get("filler", {"mode": "surrogate"}),
                mining=MiningParams(**raw.get("mining", {})),
                attack=AttackConfig(**attack_raw),
                require_label_match=require,
                augment_p=float(augment_raw.get("p", 0.5)),
                augment_max_perturb=int(augment_raw.get("max_perturb", 5)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad config {path}: {exc}") from exc
        if cfg.language not in ("python", "java", "c"):
            raise ConfigError(f"unsupported language {cfg.language!r}")
        if not cfg.corpus.exists():
            raise ConfigError(f"corpus path {cfg.corpus} does not exist")
        return cfg


def load_corpus(corpus_dir: Path, language: str) -> list[SourceUnit]:
    """Read a corpus directory: index.jsonl of {id, path, label?}."""
    index = corpus_dir / "index.jsonl"
    if not index.exists():
        raise ConfigError(f"{index} missing")
    units = []
    with open(index, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            path = corpus_dir / record["path"]
            try:
                text = path.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as exc:
                log.warning("skipping unreadable corpus file %s: %s", path, exc)
                continue
            units.append(
                SourceUnit(
                    id=str(record["id"]),
                    language=language,
                    text=text,
                    label_hint=record.get("label"),
                )
            )
    units.sort(key=lambda u: u.id)
    return units


def write_corpus(corpus_dir: Path, units: list[SourceUnit], suffix: str) -> None:
    corpus_dir.mkdir(parents=True, exist_ok=True)
    with open(corpus_dir / "index.jsonl", "w", encoding="utf-8") as fh:
        for unit in sorted(units, key=lambda u: u.id):
            name = f"{unit.id}{suffix}"
            (corpus_dir / name).write_text(unit.text, encoding="utf-8")
            record = {"id": unit.id, "path": name}
            if unit.label_hint is not None:
                record["label"] = unit.label_hint
            fh.write(json.dumps(record, sort_keys=True) + "\n")


SUFFIXES = {"python": ".py", "c": ".c", "java": ".java"}


def make_victim(config: Config):
    mode = config.victim.get("mode", "surrogate")
    if mode == "surrogate":
        path = Path(config.victim["model_path"])
        if not path.is_absolute():
            path = config.output_dir / path
        if not path.exists():
            raise ConfigError(f"surrogate victim model {path} not found")
        return SurrogateVictim.load(path)
    if mode == "http":
        return HttpVictim(config.victim["endpoint"], config.language)
    raise ConfigError(f"unknown victim mode {mode!r}")


def make_filler(config: Config):
    mode = config.filler.get("mode", "surrogate")
    if mode == "surrogate":
        return SurrogateFiller(config.language, seed=config.seed)
    if mode == "http":
        return HttpFiller(config.filler["endpoint"], config.language)
    raise ConfigError(f"unknown filler mode {mode!r}")


def _load_probe(config: Config, units: list[SourceUnit]) -> ProbeCorpus:
    probe_path = config.output_dir / "probe.jsonl"
    if not probe_path.exists():
        raise ConfigError(f"{probe_path} missing; run `astveil probe` first")
    predicted: dict[str, int] = {}
    with open(probe_path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                record = json.loads(line)
                predicted[record["unit_id"]] = record["predicted_class"]
    records = [
        ProbeRecord(unit=u, graph=parse_source(u), predicted_class=predicted[u.id])
        for u in units
        if u.id in predicted
    ]
    num_classes = max(predicted.values()) + 1 if predicted else 0
    return ProbeCorpus(records=records, num_classes=num_classes)


# --- commands ------------------------------------------------------------------


def cmd_probe(config: Config) -> int:
    victim = make_victim(config)
    units = load_corpus(config.corpus, config.language)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    with open(config.output_dir / "probe.jsonl", "w", encoding="utf-8") as fh:
        for unit in units:
            prediction = victim.predict(unit.text)
            fh.write(
                json.dumps({"unit_id": unit.id, "predicted_class": prediction.predicted}, sort_keys=True)
                + "\n"
            )
    click.echo(f"probed {len(units)} units -> {config.output_dir / 'probe.jsonl'}")
    return EXIT_OK


def cmd_mine(config: Config) -> int:
    units = load_corpus(config.corpus, config.language)
    corpus = _load_probe(config, units)
    params = config.mining
    mining_graphs = {id(r): truncate_graph(r.graph, params.max_nodes) for r in corpus.records}
    datasets = mining.build_ova_datasets(corpus)

    sets: list[mining.PatternSet] = []
    for dataset in datasets:
        positives = [mining_graphs[id(r)] for r in dataset.positive_records]
        negative_ids = {id(r) for r in corpus.records if r.predicted_class != dataset.target_class}
        negatives = [mining_graphs[id(r)] for r in corpus.records if id(r) in negative_ids]
        support = params.min_support or max(2, math.ceil(0.05 * len(positives)))
        candidates = mining.enumerate_frequent(positives + negatives, support, params.max_edges)
        selected = mining.greedy_select(
            candidates, positives, negatives, params.k, target_class=dataset.target_class
        )
        sets.append(selected)

    union: list[mining.Pattern] = []
    seen = set()
    for ps in sets:
        for pattern in ps.patterns:
            if pattern.canonical_code not in seen:
                seen.add(pattern.canonical_code)
                union.append(pattern)

    templates: dict[str, dict] = {}
    for pattern in union:
        try:
            template = synthesis.pattern_to_template(pattern, corpus, instance_rank=params.template_instance)
        except Exception as exc:  # pattern with no renderable instance
            log.warning("no template for %s: %s", pattern.pattern_id, exc)
            continue
        templates[pattern.pattern_id] = template.to_json()

    mining.save_pattern_sets(config.output_dir / "patterns.json", config.language, sets, templates)

    usable = [p for p in union if p.pattern_id in templates]
    features = [metamodel.featurize(r.graph, usable) for r in corpus.records]
    labels = [r.predicted_class for r in corpus.records]
    meta = metamodel.train_meta(features, labels, pattern_set_id=metamodel.pattern_set_fingerprint(usable))
    meta.save(config.output_dir / "meta_model.json")
    click.echo(
        f"mined {sum(len(s) for s in sets)} patterns over {len(sets)} classes "
        f"({len(templates)} templated) -> {config.output_dir / 'patterns.json'}"
    )
    return EXIT_OK


def load_attack_patterns(config: Config) -> list[AttackPattern]:
    path = config.output_dir / "patterns.json"
    if not path.exists():
        raise ConfigError(f"{path} missing; run `astveil mine` first")
    _, sets, templates = mining.load_pattern_sets(path)
    out: list[AttackPattern] = []
    seen = set()
    for ps in sets:
        for pattern in ps.patterns:
            if pattern.canonical_code in seen or pattern.pattern_id not in templates:
                continue
            seen.add(pattern.canonical_code)
            out.append(
                AttackPattern(
                    pattern=pattern,
                    template=synthesis.MaskedTemplate.from_json(templates[pattern.pattern_id]),
                )
            )
    return out


def cmd_attack(config: Config) -> int:
    victim = make_victim(config)
    filler = make_filler(config)
    patterns = load_attack_patterns(config)
    meta_path = config.output_dir / "meta_model.json"
    if not meta_path.exists():
        raise ConfigError(f"{meta_path} missing; run `astveil mine` first")
    meta = metamodel.MetaModel.load(meta_path)
    corpus_dir = config.attack_corpus or config.corpus
    units = load_corpus(corpus_dir, config.language)
    if config.require_label_match:
        kept = []
        for unit in units:
            if unit.label_hint is None:
                continue
            if victim.predict(unit.text).predicted == unit.label_hint:
                kept.append(unit)
        units = kept

    def run_one(unit: SourceUnit) -> engine.AttackReport:
        return engine.attack(unit, victim, filler, patterns, meta, config.attack, seed=config.seed)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            reports = list(pool.map(run_one, units))
    else:
        reports = [run_one(u) for u in units]
    reports.sort(key=lambda r: r.unit_id)

    config.output_dir.mkdir(parents=True, exist_ok=True)
    engine.save_reports(config.output_dir / "reports.jsonl", reports)
    summary = engine.summarize(reports)
    payload = {
        "summary": summary.to_json(),
        "pattern_frequency": [[pid, freq] for pid, freq in engine.pattern_frequency(reports)],
    }
    with open(config.output_dir / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")
    shown = "n/a" if summary.asr is None else f"{summary.asr:.3f}"
    click.echo(f"attacked {len(reports)} units; ASR={shown}")
    return EXIT_OK


def cmd_augment(config: Config) -> int:
    filler = make_filler(config)
    patterns = load_attack_patterns(config)
    units = load_corpus(config.corpus, config.language)
    results = engine.augment_corpus(
        units,
        patterns,
        filler,
        p=config.augment_p,
        max_perturb=config.augment_max_perturb,
        seed=config.seed,
    )
    out_dir = config.output_dir / "augmented"
    write_corpus(out_dir, [r.unit for r in results], SUFFIXES[config.language])
    manifest = [
        {"id": r.unit.id, "perturbed": r.perturbed, "insertions": r.insertions} for r in results
    ]
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")
    perturbed = sum(1 for r in results if r.perturbed)
    click.echo(f"augmented corpus -> {out_dir} ({perturbed}/{len(results)} perturbed)")
    return EXIT_OK


def cmd_report(config: Config) -> int:
    path = config.output_dir / "reports.jsonl"
    if not path.exists():
        raise ConfigError(f"{path} missing; run `astveil attack` first")
    reports = engine.load_reports(path)
    summary = engine.summarize(reports)
    click.echo(f"attempted: {summary.attempted}")
    click.echo(f"successes: {summary.successes}")
    click.echo("ASR: n/a" if summary.asr is None else f"ASR: {summary.asr:.4f}")
    if summary.successes:
        click.echo(f"mu_TC: {summary.mu_tc:.3f}  sigma_TC: {summary.sigma_tc:.3f}")
        click.echo(f"mu_TCR: {summary.mu_tcr:.4f}  sigma_TCR: {summary.sigma_tcr:.4f}")
    for pid, freq in engine.pattern_frequency(reports)[:10]:
        click.echo(f"pattern {pid}: {freq:.3f}")
    return EXIT_OK


# --- entry ---------------------------------------------------------------------


def _run(command, config_path: str, overrides: dict) -> None:
    try:
        config = Config.from_file(config_path, overrides)
        code = command(config)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except ClientUnavailableError as exc:
        click.echo(f"client unavailable: {exc}", err=True)
        sys.exit(EXIT_UNAVAILABLE)
    sys.exit(code)


def _common(f):
    f = click.option("--config", "config_path", required=True, type=click.Path())(f)
    f = click.option("--seed", type=int, default=None, help="override config seed")(f)
    f = click.option("--workers", type=int, default=None)(f)
    return f


def _overrides(seed, workers) -> dict:
    out = {}
    if seed is not None:
        out["seed"] = seed
    if workers is not None:
        out["workers"] = workers
    return out


@click.group()
def main():
    """Black-box adversarial attacks on code classifiers."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@_common
def probe(config_path, seed, workers):
    """Query the victim on the corpus and record its predictions."""
    _run(cmd_probe, config_path, _overrides(seed, workers))


@main.command()
@_common
def mine(config_path, seed, workers):
    """Mine discriminative patterns and train the meta-model."""
    _run(cmd_mine, config_path, _overrides(seed, workers))


@main.command()
@_common
@click.option("--require-label-match", is_flag=True, default=None,
              help="attack only units the victim currently classifies as their label_hint")
def attack(config_path, seed, workers, require_label_match):
    """Run the greedy attack over the corpus and emit reports."""
    overrides = _overrides(seed, workers)
    if require_label_match:
        overrides["require_label_match"] = True
    _run(cmd_attack, config_path, overrides)


@main.command()
@_common
def augment(config_path, seed, workers):
    """Write an adversarially augmented mirror of the corpus."""
    _run(cmd_augment, config_path, _overrides(seed, workers))


@main.command()
@_common
def report(config_path, seed, workers):
    """Print metrics from an existing reports.jsonl."""
    _run(cmd_report, config_path, _overrides(seed, workers))


if __name__ == "__main__":
    main()
