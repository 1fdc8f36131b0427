"""Standardized-feature embedding tests."""

import pytest

from llm2fx.errors import InvalidParams
from llm2fx.features import DspFeatures
from llm2fx.evalkit import compute_stats, embed


def feats(**overrides) -> DspFeatures:
    base = dict(sample_rate=44100, rms_energy=0.1, crest_factor=2.0,
                dynamic_spread=0.05, spectral_centroid=1000.0,
                spectral_flatness=0.5, spectral_bandwidth=500.0,
                estimated_rt60=1.0)
    base.update(overrides)
    return DspFeatures(**base)


class TestEmbed:
    def test_corpus_mean_maps_to_zero(self):
        corpus = [feats(rms_energy=0.1), feats(rms_energy=0.3)]
        stats = compute_stats(corpus)
        e = embed(feats(rms_energy=0.2), stats)
        assert all(abs(v) < 1e-9 for v in e.vector)
        assert e.standardized

    def test_two_point_closed_form(self):
        corpus = [feats(rms_energy=0.1, estimated_rt60=1.0),
                  feats(rms_energy=0.3, estimated_rt60=3.0)]
        stats = compute_stats(corpus)
        e = embed(corpus[0], stats)
        # Two symmetric points sit exactly one population-std from the
        # mean, so the varying dims map to -1.
        assert e.vector[1] == pytest.approx(-1.0)
        assert e.vector[7] == pytest.approx(-1.0)
        assert e.vector[4] == pytest.approx(0.0)

    def test_constant_dimension_maps_to_zero(self):
        corpus = [feats(rms_energy=0.1), feats(rms_energy=0.2)]
        stats = compute_stats(corpus)
        outside = embed(feats(spectral_centroid=9999.0), stats)
        assert outside.vector[4] == 0.0

    def test_eight_dims(self):
        stats = compute_stats([feats(), feats(rms_energy=0.4)])
        assert len(embed(feats(), stats).vector) == 8

    def test_silent_features_rejected(self):
        stats = compute_stats([feats(), feats(rms_energy=0.4)])
        silent = DspFeatures(44100, 0.0, None, 0.0, 0.0, 0.0, 0.0, 0.0)
        with pytest.raises(InvalidParams):
            embed(silent, stats)

    def test_empty_corpus_rejected(self):
        with pytest.raises(InvalidParams):
            compute_stats([])
