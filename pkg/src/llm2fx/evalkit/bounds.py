"""Upper/lower reference bounds for MMD scores.

Upper bound: split each word's ground-truth parameter sets into two
random halves, render both, and score half against half; this is the
agreement of ground truth with itself. Lower bound: score the full
ground-truth render set against renders of uniformly random parameters;
this is what no-skill generation achieves. Both are averaged over
several shuffle seeds.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..audio import AudioBuffer
from ..errors import DegenerateKernel, TooFewSets
from ..params import ParamSet, random_params
from .embed import StandardizationStats, compute_stats, embed
from .mmd import Embedding, KernelConfig, mmd_score
from .render import FeatureCache

MIN_SETS = 4
DEFAULT_SEEDS = 5


@dataclass(frozen=True)
class BoundsReport:
    upper_bound: float
    lower_bound: float
    delta: float
    seeds_used: int


def _word_rng(word: str, seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(word.encode())])


def _score(x: list[Embedding], y: list[Embedding], kernel: KernelConfig) -> float:
    # Identical point clouds (duplicated halves) degenerate the median
    # bandwidth; their discrepancy is 0 by construction.
    try:
        return mmd_score(x, y, kernel)
    except DegenerateKernel:
        return 0.0


def reference_stats(
    reference: Mapping[str, Sequence[ParamSet]],
    cache: FeatureCache,
) -> StandardizationStats:
    """Standardization over every ground-truth render in the corpus."""
    feats = [cache.features_of(p) for word in sorted(reference) for p in reference[word]]
    return compute_stats(feats)


def compute_bounds(
    reference: Mapping[str, Sequence[ParamSet]],
    fx_type: str,
    fixture: AudioBuffer,
    seeds: int = DEFAULT_SEEDS,
    random_count: int | None = None,
    kernel: KernelConfig = KernelConfig(),
) -> dict[str, BoundsReport]:
    """Per-word bounds on one dry fixture.

    Args:
        reference: word -> ground-truth parameter sets (each >= 4).
        fx_type: "eq" or "reverb"; the random baseline draws this schema.
        fixture: Dry clip the parameter sets are rendered onto.
        seeds: Shuffle/draw repetitions averaged into the report.
        random_count: Size of the random side of the lower bound;
            defaults to the word's ground-truth count. Set it to the
            trial count when the bound is compared against trial-based
            scores, so both sides carry the same estimator bias.
        kernel: MMD kernel settings.

    Returns:
        word -> BoundsReport, means over seeds.

    Raises:
        TooFewSets: some word has fewer than 4 parameter sets.
    """
    for word, sets in reference.items():
        if len(sets) < MIN_SETS:
            raise TooFewSets(f"word {word!r} has {len(sets)} sets, need {MIN_SETS}")

    cache = FeatureCache(fixture)
    stats = reference_stats(reference, cache)
    out: dict[str, BoundsReport] = {}
    for word in sorted(reference):
        sets = list(reference[word])
        gt_embs = [embed(cache.features_of(p), stats) for p in sets]
        uppers: list[float] = []
        lowers: list[float] = []
        for seed in range(seeds):
            rng = _word_rng(word, seed)
            perm = rng.permutation(len(sets))
            half = len(sets) // 2
            first = [gt_embs[i] for i in perm[:half]]
            second = [gt_embs[i] for i in perm[half:]]
            uppers.append(_score(first, second, kernel))

            count = random_count if random_count is not None else len(sets)
            drawn = [random_params(fx_type, rng, fixture.sample_rate) for _ in range(count)]
            rnd_embs = [embed(cache.features_of(p), stats) for p in drawn]
            lowers.append(_score(gt_embs, rnd_embs, kernel))
        upper = float(np.mean(uppers))
        lower = float(np.mean(lowers))
        out[word] = BoundsReport(upper, lower, upper - lower, seeds)
    return out


def macro_bounds(reports: Mapping[str, BoundsReport]) -> BoundsReport:
    """Mean row across words (the Avg line of the bounds table)."""
    upper = float(np.mean([r.upper_bound for r in reports.values()]))
    lower = float(np.mean([r.lower_bound for r in reports.values()]))
    seeds = max((r.seeds_used for r in reports.values()), default=0)
    return BoundsReport(upper, lower, upper - lower, seeds)
