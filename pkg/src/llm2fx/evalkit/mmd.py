"""Maximum mean discrepancy between two embedding samples.

Biased V-statistic with a Gaussian kernel: diagonal terms are included,
which makes the self-distance exactly zero and the estimate nonnegative
before clamping. Bandwidth defaults to the median of pooled pairwise
distances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..errors import DegenerateKernel, DimensionMismatch, InvalidParams

MEDIAN_HEURISTIC = "median-heuristic"


@dataclass(frozen=True)
class Embedding:
    """One point of a feature distribution."""

    vector: tuple[float, ...]
    standardized: bool = False


@dataclass(frozen=True)
class KernelConfig:
    kind: str = "gaussian"
    bandwidth: Union[float, str] = MEDIAN_HEURISTIC

    def validate(self) -> None:
        if self.kind != "gaussian":
            raise InvalidParams(f"unknown kernel kind {self.kind!r}")
        if isinstance(self.bandwidth, str):
            if self.bandwidth != MEDIAN_HEURISTIC:
                raise InvalidParams(f"unknown bandwidth rule {self.bandwidth!r}")
        elif self.bandwidth <= 0:
            raise InvalidParams("explicit bandwidth must be positive")


Points = Union[Sequence[Embedding], np.ndarray]


def _as_matrix(points: Points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        matrix = np.atleast_2d(np.asarray(points, dtype=np.float64))
    else:
        matrix = np.array([p.vector for p in points], dtype=np.float64)
    if not np.all(np.isfinite(matrix)):
        raise InvalidParams("embeddings must be finite")
    return matrix


def _sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    diff = a[:, None, :] - b[None, :, :]
    return np.sum(diff * diff, axis=2)


def resolve_bandwidth(x: np.ndarray, y: np.ndarray, kernel: KernelConfig) -> float:
    """Explicit sigma, or the median pairwise distance over the pooled
    sample (distinct pairs only)."""
    if not isinstance(kernel.bandwidth, str):
        return float(kernel.bandwidth)
    pooled = np.vstack([x, y])
    d2 = _sq_dists(pooled, pooled)
    pairs = d2[np.triu_indices(len(pooled), k=1)]
    sigma = float(np.sqrt(np.median(pairs)))
    if sigma == 0.0:
        raise DegenerateKernel("all pooled points identical; median bandwidth is 0")
    return sigma


def mmd2(x: Points, y: Points, kernel: KernelConfig = KernelConfig()) -> float:
    """Squared-MMD estimate, clamped at 0.

    Args:
        x, y: Two samples, each at least 2 points of equal dimension.
        kernel: Gaussian kernel settings.

    Returns:
        max(0, mean(Kxx) + mean(Kyy) - 2 mean(Kxy)).

    Raises:
        DimensionMismatch: samples of unequal dimension.
        DegenerateKernel: median heuristic resolves to zero bandwidth.
        InvalidParams: fewer than 2 points on either side.
    """
    kernel.validate()
    mx = _as_matrix(x)
    my = _as_matrix(y)
    if mx.shape[1] != my.shape[1]:
        raise DimensionMismatch(f"dims differ: {mx.shape[1]} vs {my.shape[1]}")
    if len(mx) < 2 or len(my) < 2:
        raise InvalidParams("each sample needs at least 2 points")
    sigma = resolve_bandwidth(mx, my, kernel)
    denom = 2.0 * sigma * sigma
    kxx = np.exp(-_sq_dists(mx, mx) / denom)
    kyy = np.exp(-_sq_dists(my, my) / denom)
    kxy = np.exp(-_sq_dists(mx, my) / denom)
    value = float(kxx.mean() + kyy.mean() - 2.0 * kxy.mean())
    return max(0.0, value)


def mmd_score(x: Points, y: Points, kernel: KernelConfig = KernelConfig()) -> float:
    """Reported score: sqrt of the clamped squared estimate."""
    return float(np.sqrt(mmd2(x, y, kernel)))
