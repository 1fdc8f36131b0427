"""Two-sample evaluation: embeddings, MMD, bounds, and the runner."""

from .bounds import BoundsReport, compute_bounds, macro_bounds
from .embed import StandardizationStats, compute_stats, embed
from .mmd import Embedding, KernelConfig, mmd2, mmd_score
from .render import FeatureCache, param_render_seed, render_params
from .runner import (
    EvalReport,
    EvalRow,
    run_eval,
    write_bounds_csv,
    write_bounds_json,
    write_eval_csv,
    write_eval_json,
)

__all__ = [
    "BoundsReport",
    "Embedding",
    "EvalReport",
    "EvalRow",
    "FeatureCache",
    "KernelConfig",
    "StandardizationStats",
    "compute_bounds",
    "compute_stats",
    "embed",
    "macro_bounds",
    "mmd2",
    "mmd_score",
    "param_render_seed",
    "render_params",
    "run_eval",
    "write_bounds_csv",
    "write_bounds_json",
    "write_eval_csv",
    "write_eval_json",
]
