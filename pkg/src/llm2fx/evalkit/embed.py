"""Feature standardization: z-scored DSP descriptors as the embedding."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import InvalidParams
from ..features import FEATURE_KEYS, DspFeatures
from .mmd import Embedding

STD_FLOOR = 1e-9


def _as_vector(features: DspFeatures) -> np.ndarray:
    if features.crest_factor is None:
        raise InvalidParams("silent features cannot be embedded")
    return np.array([getattr(features, key) for key in FEATURE_KEYS], dtype=np.float64)


@dataclass(frozen=True)
class StandardizationStats:
    """Per-dimension corpus mean and floored std, in feature key order.
    degenerate marks dimensions that were constant across the corpus."""

    mean: tuple[float, ...]
    std: tuple[float, ...]
    degenerate: tuple[bool, ...]


def compute_stats(corpus: Sequence[DspFeatures]) -> StandardizationStats:
    """Mean/std over the reference corpus. A constant dimension carries
    no distributional information, so it is marked degenerate and maps
    to 0 for every embedded input instead of exploding under a tiny
    divisor."""
    if not corpus:
        raise InvalidParams("cannot standardize over an empty corpus")
    matrix = np.stack([_as_vector(f) for f in corpus])
    mean = matrix.mean(axis=0)
    raw_std = matrix.std(axis=0)
    std = np.maximum(raw_std, STD_FLOOR)
    return StandardizationStats(
        tuple(float(v) for v in mean),
        tuple(float(v) for v in std),
        tuple(bool(v) for v in raw_std <= STD_FLOOR),
    )


def embed(features: DspFeatures, stats: StandardizationStats) -> Embedding:
    """Z-score the eight descriptors with corpus statistics."""
    vec = (_as_vector(features) - np.array(stats.mean)) / np.array(stats.std)
    vec[np.array(stats.degenerate)] = 0.0
    return Embedding(tuple(float(v) for v in vec), standardized=True)
