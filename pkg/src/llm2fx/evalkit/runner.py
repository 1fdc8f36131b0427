"""End-to-end evaluation: generate, render, embed, score each cell."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ..audio import AudioBuffer
from ..errors import (
    DegenerateKernel,
    InsufficientData,
    Llm2FxError,
    MissingFixture,
)
from ..params import ParamSet
from ..textgen.backends import Backend, BackendConfig
from ..textgen.generate import GenerationRequest, generate
from .bounds import BoundsReport, macro_bounds
from .embed import compute_stats, embed
from .mmd import KernelConfig, mmd_score
from .render import FeatureCache


@dataclass(frozen=True)
class EvalRow:
    """One (word, instrument, effect) cell of the report."""

    word: str
    instrument: str
    fx_type: str
    mmd: float
    trials_ok: int
    trials_failed: int
    clamp_rate: float


@dataclass
class EvalReport:
    rows: list[EvalRow]
    macro_per_instrument: dict[str, float]
    macro_overall: float


def run_eval(
    requests: Sequence[GenerationRequest],
    backend: BackendConfig | Backend,
    fixtures: Mapping[str, AudioBuffer],
    reference: Mapping[tuple[str, str], Sequence[ParamSet]],
    kernel: KernelConfig = KernelConfig(),
) -> EvalReport:
    """Score every requested cell against its reference distribution.

    Args:
        requests: One GenerationRequest per (word, instrument, effect).
        backend: Config or live backend handed to generate().
        fixtures: instrument -> dry clip.
        reference: (fx_type, word) -> ground-truth parameter sets.
        kernel: MMD kernel settings.

    Returns:
        EvalReport with one row per request plus macro averages.

    Raises:
        MissingFixture: an instrument has no dry clip.
        InsufficientData: a word has no reference sets, or every trial
            of some cell failed.
    """
    caches: dict[str, FeatureCache] = {}
    stats_memo: dict[tuple[str, str], object] = {}

    def cache_for(instrument: str) -> FeatureCache:
        if instrument not in fixtures:
            raise MissingFixture(f"no dry fixture for instrument {instrument!r}")
        if instrument not in caches:
            caches[instrument] = FeatureCache(fixtures[instrument])
        return caches[instrument]

    def stats_for(fx_type: str, instrument: str):
        key = (fx_type, instrument)
        if key not in stats_memo:
            cache = cache_for(instrument)
            feats = [
                cache.features_of(p)
                for (fx, word) in sorted(reference)
                if fx == fx_type
                for p in reference[(fx, word)]
            ]
            if not feats:
                raise InsufficientData(f"no reference sets for fx_type {fx_type!r}")
            stats_memo[key] = compute_stats(feats)
        return stats_memo[key]

    rows: list[EvalRow] = []
    for req in requests:
        key = (req.fx_type, req.timbre_word)
        if key not in reference:
            raise InsufficientData(f"no reference sets for word {req.timbre_word!r}")
        cache = cache_for(req.instrument)
        stats = stats_for(req.fx_type, req.instrument)

        results = generate(req, backend)
        embeddings = []
        parsed = 0
        clamped = 0
        for r in results:
            if r.params is None:
                continue
            parsed += 1
            if r.clamped_fields:
                clamped += 1
            try:
                embeddings.append(embed(cache.features_of(r.params), stats))
            except Llm2FxError:
                # Render or extraction failure (rate conflict, silence)
                # fails the trial, not the run.
                continue
        ok = len(embeddings)
        if ok == 0:
            raise InsufficientData(
                f"all {req.trials} trials failed for ({req.timbre_word}, {req.instrument})")

        ref_embs = [embed(cache.features_of(p), stats) for p in reference[key]]
        try:
            score = mmd_score(embeddings, ref_embs, kernel)
        except DegenerateKernel:
            score = 0.0
        rows.append(EvalRow(
            word=req.timbre_word,
            instrument=req.instrument,
            fx_type=req.fx_type,
            mmd=score,
            trials_ok=ok,
            trials_failed=req.trials - ok,
            clamp_rate=clamped / parsed if parsed else 0.0,
        ))

    by_instrument: dict[str, list[float]] = {}
    for row in rows:
        by_instrument.setdefault(row.instrument, []).append(row.mmd)
    macro_per_instrument = {k: float(np.mean(v)) for k, v in sorted(by_instrument.items())}
    macro_overall = float(np.mean([r.mmd for r in rows])) if rows else 0.0
    return EvalReport(rows, macro_per_instrument, macro_overall)


def write_eval_csv(report: EvalReport, path: str | Path) -> None:
    """One row per word x instrument x effect."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", "instrument", "fx_type", "mmd",
                         "trials_ok", "trials_failed", "clamp_rate"])
        for r in report.rows:
            writer.writerow([r.word, r.instrument, r.fx_type, f"{r.mmd:.6f}",
                             r.trials_ok, r.trials_failed, f"{r.clamp_rate:.4f}"])


def write_eval_json(report: EvalReport, path: str | Path) -> None:
    payload = {
        "rows": [asdict(r) for r in report.rows],
        "macro_per_instrument": report.macro_per_instrument,
        "macro_overall": report.macro_overall,
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def write_bounds_csv(reports: Mapping[str, BoundsReport], path: str | Path) -> None:
    """Table of word, upper bound, lower bound, delta, with a macro row."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", "upper_bound", "lower_bound", "delta", "seeds"])
        for word in sorted(reports):
            r = reports[word]
            writer.writerow([word, f"{r.upper_bound:.6f}", f"{r.lower_bound:.6f}",
                             f"{r.delta:.6f}", r.seeds_used])
        macro = macro_bounds(reports)
        writer.writerow(["__macro__", f"{macro.upper_bound:.6f}",
                         f"{macro.lower_bound:.6f}", f"{macro.delta:.6f}", macro.seeds_used])


def write_bounds_json(reports: Mapping[str, BoundsReport], path: str | Path) -> None:
    payload = {
        "words": {w: asdict(r) for w, r in sorted(reports.items())},
        "macro": asdict(macro_bounds(reports)),
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")
