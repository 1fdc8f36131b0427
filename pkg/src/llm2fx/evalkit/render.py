"""Shared render-and-extract pipeline for evaluation.

Reverb renders are seeded from a content hash of the parameters, so the
same parameter set always yields the same wet audio no matter which
trial, word, or seed produced it.
"""

from __future__ import annotations

import zlib

from ..audio import AudioBuffer
from ..eq import apply_eq, apply_graphic_eq
from ..features import DspFeatures, extract_features
from ..params import EqParams, GraphicEqParams, ParamSet, params_to_json
from ..reverb import apply_reverb


def param_render_seed(params: ParamSet) -> int:
    """Deterministic noise seed derived from the parameter values."""
    return zlib.crc32(params_to_json(params, indent=0).encode())


def render_params(fixture: AudioBuffer, params) -> AudioBuffer:
    """Apply one parameter set to a dry fixture."""
    if isinstance(params, EqParams):
        return apply_eq(fixture, params)
    if isinstance(params, GraphicEqParams):
        return apply_graphic_eq(fixture, params)
    return apply_reverb(fixture, params, seed=param_render_seed(params))


class FeatureCache:
    """Render-and-extract with memoization on the (frozen) parameter
    set; one cache per fixture."""

    def __init__(self, fixture: AudioBuffer):
        self.fixture = fixture
        self._memo: dict[ParamSet, DspFeatures] = {}

    def features_of(self, params: ParamSet) -> DspFeatures:
        if params not in self._memo:
            self._memo[params] = extract_features(render_params(self.fixture, params))
        return self._memo[params]
