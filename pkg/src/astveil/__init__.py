"""astveil: black-box adversarial attacks on code classifiers via
mined discriminative AST patterns inserted as mask-filled dead code."""

from .clients import FillResult, HttpFiller, HttpVictim, SurrogateFiller, SurrogateVictim, VictimPrediction
from .engine import (
    AttackConfig,
    AttackPattern,
    AttackReport,
    MetricsSummary,
    attack,
    augment_corpus,
    fill_masks,
    importance_scores,
    pattern_frequency,
    summarize,
)
from .graphs import (
    AstGraph,
    SourceUnit,
    Statement,
    extract_statements,
    has_parse_error,
    parse_source,
    remove_statement,
    tokenize,
)
from .matching import PatternInstance, contains_pattern, find_instances
from .metamodel import FeatureVector, MetaModel, choose_pattern, featurize, missing_patterns, prob_change, train_meta
from .mining import (
    Pattern,
    PatternSet,
    ProbeCorpus,
    ProbeRecord,
    build_ova_datasets,
    canonical_dfs_code,
    cork_quality,
    enumerate_frequent,
    greedy_select,
)
from .synthesis import MaskedSource, MaskedTemplate, apply_semantics_guard, pattern_to_template, render_insertion

__version__ = "0.1.0"

__all__ = [
    "AstGraph",
    "AttackConfig",
    "AttackPattern",
    "AttackReport",
    "FeatureVector",
    "FillResult",
    "HttpFiller",
    "HttpVictim",
    "MaskedSource",
    "MaskedTemplate",
    "MetaModel",
    "MetricsSummary",
    "Pattern",
    "PatternInstance",
    "PatternSet",
    "ProbeCorpus",
    "ProbeRecord",
    "SourceUnit",
    "Statement",
    "SurrogateFiller",
    "SurrogateVictim",
    "VictimPrediction",
    "apply_semantics_guard",
    "attack",
    "augment_corpus",
    "build_ova_datasets",
    "canonical_dfs_code",
    "choose_pattern",
    "contains_pattern",
    "cork_quality",
    "enumerate_frequent",
    "extract_statements",
    "featurize",
    "fill_masks",
    "find_instances",
    "greedy_select",
    "has_parse_error",
    "importance_scores",
    "missing_patterns",
    "parse_source",
    "pattern_frequency",
    "pattern_to_template",
    "prob_change",
    "remove_statement",
    "render_insertion",
    "summarize",
    "tokenize",
    "train_meta",
]
