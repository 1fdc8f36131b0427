"""Feature extractor tests: closed-form signals, RT60 construction,
serialization byte-compat."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from llm2fx.audio import AudioBuffer, sine, white_noise
from llm2fx.eq import apply_eq
from llm2fx.errors import SchemaMismatch, SilentSignal, TooShort
from llm2fx.features import (
    DspFeatures,
    estimate_rt60,
    extract_features,
    parse_features,
    serialize_features,
)
from llm2fx.params import EqParams

FEATURE_BLOCK = """{
    "sample_rate": 44100,
    "rms_energy": 0.04,
    "crest_factor": 11.86,
    "dynamic_spread": 0.06,
    "spectral_centroid": 1476.24,
    "spectral_flatness": 0.01,
    "spectral_bandwidth": 1796.65,
    "estimated_rt60": 2.94
}"""


class TestExtract:
    def test_constant_signal(self):
        buf = AudioBuffer(44100, np.full((1, 1000), 0.5))
        f = extract_features(buf)
        assert f.rms_energy == pytest.approx(0.5)
        assert f.crest_factor == pytest.approx(1.0)
        assert f.dynamic_spread == pytest.approx(0.0, abs=1e-12)

    def test_sine_closed_form(self):
        buf = sine(1000.0, 2.0, sample_rate=44100, amplitude=0.5)
        f = extract_features(buf)
        assert f.rms_energy == pytest.approx(0.5 / np.sqrt(2), abs=1e-3)
        assert f.crest_factor == pytest.approx(np.sqrt(2), rel=0.01)
        assert f.spectral_centroid == pytest.approx(1000.0, abs=5.0)

    def test_against_direct_summation(self):
        # Noise keeps every bin far from zero, so the oracle is not
        # dominated by round-off in near-empty bins.
        buf = white_noise(1.0, sample_rate=22050, seed=41)
        f = extract_features(buf)
        x = buf.data[0]
        spectrum = np.abs(np.fft.fft(x))[: len(x) // 2 + 1]
        freqs = np.arange(len(spectrum)) * buf.sample_rate / len(x)
        centroid = (freqs * spectrum).sum() / spectrum.sum()
        bandwidth = np.sqrt(((freqs - centroid) ** 2 * spectrum).sum() / spectrum.sum())
        flatness = np.exp(np.mean(np.log(np.maximum(spectrum, 1e-12)))) / spectrum.mean()
        assert f.spectral_centroid == pytest.approx(centroid, rel=1e-9)
        assert f.spectral_bandwidth == pytest.approx(bandwidth, rel=1e-9)
        assert f.spectral_flatness == pytest.approx(flatness, rel=1e-9)

    def test_flatness_convention(self):
        tone = sine(500.0, 1.0, sample_rate=44100)
        noise = white_noise(1.0, seed=17)
        assert extract_features(tone).spectral_flatness < 0.1
        assert extract_features(noise).spectral_flatness > 0.7

    def test_silent_raises(self):
        buf = AudioBuffer(44100, np.zeros((1, 1000)))
        with pytest.raises(SilentSignal):
            extract_features(buf)

    def test_short_raises(self):
        buf = AudioBuffer(44100, np.ones((1, 100)))
        with pytest.raises(TooShort):
            extract_features(buf)

    def test_stereo_averaged(self):
        mono = white_noise(0.2, seed=3)
        stereo = AudioBuffer(mono.sample_rate, np.vstack([mono.data, mono.data]))
        a = extract_features(mono)
        b = extract_features(stereo)
        assert a.rms_energy == pytest.approx(b.rms_energy)
        assert a.spectral_centroid == pytest.approx(b.spectral_centroid)

    def test_high_shelf_raises_centroid(self):
        dry = white_noise(1.0, seed=23)
        boosted = apply_eq(dry, EqParams(high_shelf_gain_db=12.0, high_shelf_cutoff_freq=6000.0))
        assert extract_features(boosted).spectral_centroid > extract_features(dry).spectral_centroid

    @settings(max_examples=20, deadline=None)
    @given(a=st.floats(min_value=1e-3, max_value=1.0))
    def test_amplitude_scaling(self, a):
        base = white_noise(0.1, seed=31)
        scaled = AudioBuffer(base.sample_rate, a * base.data)
        fb = extract_features(base)
        fs = extract_features(scaled)
        assert fs.rms_energy == pytest.approx(a * fb.rms_energy, rel=1e-6)
        assert fs.crest_factor == pytest.approx(fb.crest_factor, rel=1e-6)
        assert fs.spectral_centroid == pytest.approx(fb.spectral_centroid, rel=1e-6)
        assert fs.spectral_flatness == pytest.approx(fb.spectral_flatness, rel=1e-6)
        assert fs.spectral_bandwidth == pytest.approx(fb.spectral_bandwidth, rel=1e-6)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**31))
    def test_crest_and_spread_bounds(self, seed):
        buf = white_noise(0.05, seed=seed)
        f = extract_features(buf)
        assert f.crest_factor >= 1.0
        assert f.dynamic_spread <= f.rms_energy + 1e-12


class TestRt60:
    def test_constructed_decay(self):
        sr = 44100
        t = np.arange(2 * sr) / sr
        rng = np.random.default_rng(0)
        ir = rng.standard_normal(2 * sr) * 10.0 ** (-3.0 * t / 0.8)
        est = estimate_rt60(AudioBuffer(sr, ir[None, :]))
        assert est == pytest.approx(0.8, rel=0.1)

    def test_instant_decay_is_zero(self):
        sr = 44100
        ir = np.zeros(sr)
        ir[0] = 1.0
        assert estimate_rt60(AudioBuffer(sr, ir[None, :])) == 0.0

    def test_monotone_in_decay(self):
        sr = 44100
        t = np.arange(4 * sr) / sr
        rng = np.random.default_rng(1)
        noise = rng.standard_normal(4 * sr)
        slow = estimate_rt60(AudioBuffer(sr, (noise * 10.0 ** (-3.0 * t / 2.0))[None, :]))
        fast = estimate_rt60(AudioBuffer(sr, (noise * 10.0 ** (-3.0 * t / 0.5))[None, :]))
        assert slow > fast

    def test_never_reaching_threshold_is_zero(self):
        sr = 44100
        buf = AudioBuffer(sr, np.ones((1, sr)))
        assert estimate_rt60(buf) >= 0.0

    def test_short_raises(self):
        sr = 44100
        with pytest.raises(TooShort):
            estimate_rt60(AudioBuffer(sr, np.ones((1, 1000))))

    def test_silent_raises(self):
        sr = 44100
        with pytest.raises(SilentSignal):
            estimate_rt60(AudioBuffer(sr, np.zeros((1, sr))))


class TestSerialization:
    def test_block_round_trip_is_byte_identical(self):
        assert serialize_features(parse_features(FEATURE_BLOCK)) == FEATURE_BLOCK

    def test_rounding(self):
        f = DspFeatures(44100, 0.0401, 11.856, 0.059, 1476.239, 0.012, 1796.649, 2.94)
        text = serialize_features(f)
        assert '"spectral_centroid": 1476.24' in text
        assert '"crest_factor": 11.86' in text

    def test_silent_marker(self):
        f = DspFeatures(44100, 0.0, None, 0.0, 0.0, 0.0, 0.0, 0.0)
        text = serialize_features(f)
        assert '"rms_energy": 0.0' in text
        assert "crest_factor" not in text
        assert '"silent": true' in text

    def test_integer_sample_rate(self):
        f = DspFeatures(44100, 0.1, 2.0, 0.05, 500.0, 0.5, 100.0, 0.0)
        assert '"sample_rate": 44100,' in serialize_features(f)

    def test_parse_rejects_non_json(self):
        with pytest.raises(SchemaMismatch):
            parse_features("not json")

    def test_parse_rejects_missing_keys(self):
        with pytest.raises(SchemaMismatch, match="estimated_rt60"):
            parse_features('{"sample_rate": 44100}')

    def test_extracted_features_serialize(self):
        f = extract_features(white_noise(0.5, seed=2))
        text = serialize_features(f)
        parsed = parse_features(text)
        assert parsed.sample_rate == 44100
        assert parsed.crest_factor == pytest.approx(round(f.crest_factor, 2))
