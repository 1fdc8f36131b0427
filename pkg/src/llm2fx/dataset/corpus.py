"""Filtered evaluation corpus: per-word parameter sets in the 6-band /
12-band schemas, dry fixtures, and a reproducible manifest.

EQ ground truth arrives as 40-band graphic settings and is converted to
the parametric schema by least-squares response matching; the per-set
fit residual is recorded. Reverb ground truth already matches the
12-band schema field for field. Wet renders are deterministic
(content-hashed noise seeds), so only feature vectors are cached to
disk, not audio.
"""

from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ..audio import AudioBuffer
from ..errors import MissingFixture
from ..evalkit.render import FeatureCache
from ..features import FEATURE_KEYS
from ..params import FX_EQ, FX_REVERB, ParamSet, params_to_json
from .fixtures import make_fixture
from .graphic_fit import fit_parametric_from_graphic
from .merge import apply_merge_rules, load_merge_rules
from .socialfx import RawExample, count_sets, load_socialfx, vocabulary
from .filters import probe_filter, tf_filter

log = logging.getLogger(__name__)


@dataclass
class CorpusSplit:
    fx_type: str
    vocabulary: list[str]
    sets: dict[str, list[ParamSet]]
    fit_residuals: dict[str, list[float]] = field(default_factory=dict)

    @property
    def total_sets(self) -> int:
        return sum(len(v) for v in self.sets.values())


@dataclass
class EvalCorpus:
    splits: dict[str, CorpusSplit]
    fixtures: dict[str, AudioBuffer]
    provenance: list[str]

    def reference(self, fx_type: str) -> dict[str, list[ParamSet]]:
        """word -> parameter sets, the shape the bounds protocol takes."""
        return dict(self.splits[fx_type].sets) if fx_type in self.splits else {}

    def runner_reference(self) -> dict[tuple[str, str], list[ParamSet]]:
        """(fx_type, word) -> parameter sets, the shape the runner takes."""
        out = {}
        for fx_type, split in self.splits.items():
            for word, sets in split.sets.items():
                out[(fx_type, word)] = sets
        return out


def build_eval_corpus(
    examples: Sequence[RawExample],
    fixtures: Mapping[str, AudioBuffer] | None = None,
    sample_rate: int = 44100,
    parallelism: int = 4,
) -> EvalCorpus:
    """Convert filtered examples into schema-aligned per-word references.

    Raises:
        MissingFixture: no dry fixtures were provided or resolvable.
    """
    if fixtures is None:
        fixtures = {name: make_fixture(name, sample_rate)
                    for name in ("guitar", "drums", "piano")}
    if not fixtures:
        raise MissingFixture("an evaluation corpus needs at least one dry fixture")

    splits: dict[str, CorpusSplit] = {}
    provenance: list[str] = []
    for fx_type in (FX_EQ, FX_REVERB):
        rows = [e for e in examples if e.fx_type == fx_type]
        if not rows:
            continue
        words = vocabulary(rows, fx_type)
        sets: dict[str, list[ParamSet]] = {w: [] for w in words}
        residuals: dict[str, list[float]] = {w: [] for w in words}

        if fx_type == FX_EQ:
            def convert(row: RawExample) -> tuple[ParamSet, float]:
                return fit_parametric_from_graphic(row.native_params(), sample_rate)
            with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
                converted = list(pool.map(convert, rows))
            for row, (params, rms) in zip(rows, converted):
                for word in row.descriptor_terms:
                    sets[word].append(params)
                    residuals[word].append(rms)
            all_rms = [r for rs in residuals.values() for r in rs]
            provenance.append(
                f"eq: fitted {len(rows)} graphic curves, "
                f"worst residual {max(all_rms):.3f} dB")
        else:
            for row in rows:
                params = row.native_params()
                for word in row.descriptor_terms:
                    sets[word].append(params)
            provenance.append(f"reverb: mapped {len(rows)} native rows field-wise")

        splits[fx_type] = CorpusSplit(fx_type, words, sets, residuals)
        provenance.append(
            f"{fx_type}: {len(words)} words, {splits[fx_type].total_sets} sets")
    return EvalCorpus(splits, dict(fixtures), provenance)


def _param_digest(sets: Mapping[str, list[ParamSet]]) -> str:
    h = hashlib.sha256()
    for word in sorted(sets):
        for params in sets[word]:
            h.update(word.encode())
            h.update(params_to_json(params, indent=0).encode())
    return h.hexdigest()


def corpus_manifest(corpus: EvalCorpus, stages: list[dict] | None = None,
                    settings: dict | None = None) -> dict:
    """Deterministic summary: vocabularies, counts, content hashes."""
    fx_entries = {}
    for fx_type, split in sorted(corpus.splits.items()):
        counts = {w: len(split.sets[w]) for w in split.vocabulary}
        total = split.total_sets
        fx_entries[fx_type] = {
            "vocabulary": split.vocabulary,
            "set_counts": counts,
            "total_sets": total,
            "avg_sets_per_word": round(total / len(counts), 1) if counts else 0.0,
            "params_sha256": _param_digest(split.sets),
        }
    fixtures = {
        name: {
            "duration": round(buf.duration, 3),
            "sample_rate": buf.sample_rate,
            "sha256": hashlib.sha256(buf.data.tobytes()).hexdigest(),
        }
        for name, buf in sorted(corpus.fixtures.items())
    }
    manifest = {
        "fx": fx_entries,
        "fixtures": fixtures,
        "stages": stages or [],
        "settings": settings or {},
        "provenance": corpus.provenance,
    }
    canonical = json.dumps(manifest, sort_keys=True).encode()
    manifest["manifest_sha256"] = hashlib.sha256(canonical).hexdigest()
    return manifest


def write_corpus(corpus: EvalCorpus, out_dir: str | Path,
                 manifest: dict | None = None) -> Path:
    """Write manifest.json plus per-(fx, fixture) feature caches.

    Each cache is a raw float64 array (rows x 8, C order) beside a JSON
    header giving the shape, the feature key order, and each word's row
    range.
    """
    out_dir = Path(out_dir)
    (out_dir / "features").mkdir(parents=True, exist_ok=True)
    if manifest is None:
        manifest = corpus_manifest(corpus)
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")

    for fx_type, split in sorted(corpus.splits.items()):
        for name, fixture in sorted(corpus.fixtures.items()):
            cache = FeatureCache(fixture)
            rows: list[list[float]] = []
            ranges: dict[str, list[int]] = {}
            for word in split.vocabulary:
                start = len(rows)
                for params in split.sets[word]:
                    feats = cache.features_of(params)
                    rows.append([float(getattr(feats, k)) for k in FEATURE_KEYS])
                ranges[word] = [start, len(rows)]
            array = np.asarray(rows, dtype=np.float64)
            stem = out_dir / "features" / f"{fx_type}_{name}"
            array.tofile(stem.with_suffix(".f64"))
            header = {
                "dtype": "float64",
                "shape": list(array.shape),
                "feature_keys": list(FEATURE_KEYS),
                "word_rows": ranges,
                "fixture": name,
                "fx_type": fx_type,
            }
            stem.with_suffix(".json").write_text(json.dumps(header, indent=2) + "\n")
    return out_dir / "manifest.json"


def prepare_corpus(
    data_dir: str | Path,
    rules_path: str | Path,
    out_dir: str | Path | None = None,
    seed: int = 0,
    thresholds: Mapping[str, int] | None = None,
    fixtures: Mapping[str, AudioBuffer] | None = None,
    probe: bool = True,
    probe_fixtures: Mapping[str, AudioBuffer] | None = None,
    sample_rate: int = 44100,
) -> tuple[EvalCorpus, dict]:
    """Full pipeline: load, merge, frequency-filter, probe-filter, build.

    Returns the corpus and its manifest; writes both when out_dir is set.
    """
    stages: list[dict] = []

    def record(stage: str, examples: Sequence[RawExample]) -> None:
        entry: dict = {"stage": stage}
        for fx_type in (FX_EQ, FX_REVERB):
            entry[fx_type] = {
                "examples": sum(1 for e in examples if e.fx_type == fx_type),
                "sets": count_sets(list(examples), fx_type),
                "vocabulary_size": len(vocabulary(list(examples), fx_type)),
            }
        stages.append(entry)

    examples = load_socialfx(data_dir)
    record("loaded", examples)
    examples = apply_merge_rules(examples, load_merge_rules(rules_path))
    record("merged", examples)
    for fx_type in (FX_EQ, FX_REVERB):
        override = thresholds.get(fx_type) if thresholds else None
        examples = tf_filter(examples, fx_type, threshold=override)
    record("tf_filtered", examples)
    if probe:
        for fx_type in (FX_EQ, FX_REVERB):
            if any(e.fx_type == fx_type for e in examples):
                examples = probe_filter(examples, fx_type, seed=seed,
                                        fixtures=probe_fixtures)
        record("probe_filtered", examples)

    corpus = build_eval_corpus(examples, fixtures, sample_rate)
    settings = {
        "seed": seed,
        "thresholds": dict(thresholds) if thresholds else {},
        "probe": probe,
        "sample_rate": sample_rate,
    }
    manifest = corpus_manifest(corpus, stages, settings)
    if out_dir is not None:
        write_corpus(corpus, out_dir, manifest)
    return corpus, manifest
