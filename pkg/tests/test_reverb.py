"""Noise-shaped reverb tests: IR construction, mix law, determinism."""

import numpy as np
import pytest

from llm2fx.audio import AudioBuffer, sine, white_noise
from llm2fx.errors import InvalidParams
from llm2fx.features import estimate_rt60
from llm2fx.params import ReverbParams
from llm2fx.reverb import apply_reverb, ir_length, render_reverb_ir

# Appendix-style church reverb: long low-band tails, short top end.
CHURCH = ReverbParams(
    band_gains=(0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 0.9),
    band_decays=(3.0, 2.5, 2.0, 1.5, 1.2, 1.0, 0.8, 0.6, 0.4, 0.3, 0.2, 0.1),
    mix=0.7,
)


def pluck(duration: float = 2.0, sample_rate: int = 44100) -> AudioBuffer:
    """Decaying harmonic burst, a stand-in for a plucked string."""
    t = np.arange(int(duration * sample_rate)) / sample_rate
    tone = sum(np.sin(2 * np.pi * 196.0 * k * t) / k for k in range(1, 6))
    data = 0.4 * tone * np.exp(-t / 0.25)
    return AudioBuffer(sample_rate, data[None, :])


class TestRenderIr:
    def test_zero_gains_silent(self):
        params = ReverbParams(band_gains=(0.0,) * 12, band_decays=(1.0,) * 12, mix=0.5)
        ir = render_reverb_ir(params, 44100, seed=0)
        assert np.all(ir.data == 0.0)

    def test_rt60_matches_decay(self):
        params = ReverbParams(band_gains=(1.0,) * 12, band_decays=(1.0,) * 12, mix=0.5)
        ir = render_reverb_ir(params, 44100, seed=0)
        assert estimate_rt60(ir) == pytest.approx(1.0, rel=0.2)

    def test_bit_identical_for_same_seed(self):
        ir_a = render_reverb_ir(CHURCH, 44100, seed=42)
        ir_b = render_reverb_ir(CHURCH, 44100, seed=42)
        assert np.array_equal(ir_a.data, ir_b.data)
        ir_c = render_reverb_ir(CHURCH, 44100, seed=43)
        assert not np.array_equal(ir_a.data, ir_c.data)

    def test_unit_norm(self):
        ir = render_reverb_ir(CHURCH, 44100, seed=7)
        assert np.sqrt(np.sum(ir.data ** 2)) == pytest.approx(1.0, abs=1e-9)

    def test_length_law(self):
        sr = 44100
        short = ReverbParams(band_gains=(1.0,) * 12, band_decays=(0.01,) * 12, mix=0.5)
        assert ir_length(short, sr) == sr // 10
        long = ReverbParams(band_gains=(1.0,) * 12, band_decays=(30.0,) * 12, mix=0.5)
        assert ir_length(long, sr) == 10 * sr
        mid = ReverbParams(band_gains=(1.0,) * 12, band_decays=(1.0,) * 12, mix=0.5)
        assert ir_length(mid, sr) == int(np.ceil(1.2 * sr))
        ir = render_reverb_ir(mid, sr, seed=0)
        assert ir.num_samples == int(np.ceil(1.2 * sr))

    def test_stereo_channels_decorrelated(self):
        ir = render_reverb_ir(CHURCH, 44100, seed=3, channels=2)
        assert ir.channels == 2
        assert not np.array_equal(ir.data[0], ir.data[1])


class TestApplyReverb:
    def test_mix_zero_is_identity(self):
        dry = pluck(0.5)
        params = ReverbParams(band_gains=(1.0,) * 12, band_decays=(1.0,) * 12, mix=0.0)
        out = apply_reverb(dry, params, seed=0)
        assert np.array_equal(out.data, dry.data)

    def test_silent_wet_path_scales_dry(self):
        dry = pluck(0.5)
        params = ReverbParams(band_gains=(0.0,) * 12, band_decays=(1.0,) * 12, mix=0.8)
        out = apply_reverb(dry, params, seed=0)
        assert np.max(np.abs(out.data - 0.2 * dry.data)) < 1e-6

    def test_church_lengthens_decay(self):
        dry = pluck(2.0)
        wet = apply_reverb(dry, CHURCH, seed=0)
        assert estimate_rt60(wet) > estimate_rt60(dry)

    def test_length_and_channels_preserved(self):
        dry = white_noise(0.5, seed=6, channels=2)
        out = apply_reverb(dry, CHURCH, seed=1)
        assert out.num_samples == dry.num_samples
        assert out.channels == 2

    def test_mix_monotonicity(self):
        dry = pluck(1.0)
        deltas = []
        for mix in (0.0, 0.25, 0.5, 0.75, 1.0):
            params = ReverbParams(
                band_gains=CHURCH.band_gains, band_decays=CHURCH.band_decays, mix=mix)
            out = apply_reverb(dry, params, seed=9)
            deltas.append(float(np.sqrt(np.mean((out.data - dry.data) ** 2))))
        assert all(a <= b + 1e-12 for a, b in zip(deltas, deltas[1:]))

    def test_clipping_rescales_and_flags(self):
        dry = white_noise(2.0, amplitude=0.99, seed=5)
        params = ReverbParams(band_gains=(1.0,) * 12, band_decays=(2.0,) * 12, mix=1.0)
        out = apply_reverb(dry, params, seed=5)
        assert out.clipped
        assert np.max(np.abs(out.data)) <= 1.0

    def test_no_false_clip_flag(self):
        dry = pluck(0.5)
        out = apply_reverb(dry, CHURCH, seed=0)
        assert not out.clipped

    def test_invalid_params_rejected(self):
        dry = pluck(0.2)
        bad = ReverbParams(band_gains=(1.5,) + (0.0,) * 11, band_decays=(1.0,) * 12, mix=0.5)
        with pytest.raises(InvalidParams):
            apply_reverb(dry, bad, seed=0)
