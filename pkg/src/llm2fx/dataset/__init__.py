"""Corpus ingestion, filtering, schema conversion, and dry fixtures."""

from .corpus import (
    CorpusSplit,
    EvalCorpus,
    build_eval_corpus,
    corpus_manifest,
    prepare_corpus,
    write_corpus,
)
from .filters import TF_THRESHOLDS, probe_filter, tf_filter, word_counts
from .fixtures import FIXTURE_DURATIONS, fixture_names, make_fixture, write_fixture_wavs
from .graphic_fit import fit_parametric_from_graphic
from .merge import MergeRule, apply_merge_rules, load_merge_rules, parse_merge_rules
from .socialfx import RawExample, count_sets, load_socialfx, vocabulary

__all__ = [
    "CorpusSplit",
    "EvalCorpus",
    "FIXTURE_DURATIONS",
    "MergeRule",
    "RawExample",
    "TF_THRESHOLDS",
    "apply_merge_rules",
    "build_eval_corpus",
    "corpus_manifest",
    "count_sets",
    "fit_parametric_from_graphic",
    "fixture_names",
    "load_merge_rules",
    "load_socialfx",
    "make_fixture",
    "parse_merge_rules",
    "prepare_corpus",
    "probe_filter",
    "tf_filter",
    "vocabulary",
    "word_counts",
    "write_corpus",
    "write_fixture_wavs",
]
