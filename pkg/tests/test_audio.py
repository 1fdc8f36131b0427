"""Audio container and WAV round-trip tests."""

import numpy as np
import pytest

from llm2fx.audio import AudioBuffer, load_wav, load_wav_bytes, save_wav, sine, wav_bytes, white_noise
from llm2fx.errors import InvalidParams


class TestAudioBuffer:
    def test_shape_and_dtype(self):
        buf = AudioBuffer(44100, np.zeros((1, 100), dtype=np.float32))
        assert buf.data.dtype == np.float64
        assert buf.channels == 1
        assert buf.num_samples == 100

    def test_duration(self):
        buf = sine(440.0, 0.5, sample_rate=8000)
        assert buf.duration == pytest.approx(0.5)

    def test_rejects_low_sample_rate(self):
        with pytest.raises(InvalidParams):
            AudioBuffer(7999, np.zeros((1, 10)))

    def test_rejects_bad_channel_count(self):
        with pytest.raises(InvalidParams):
            AudioBuffer(44100, np.zeros((3, 10)))

    def test_rejects_empty(self):
        with pytest.raises(InvalidParams):
            AudioBuffer(44100, np.zeros((1, 0)))

    def test_to_mono_averages(self):
        data = np.stack([np.ones(10), -np.ones(10)])
        buf = AudioBuffer(44100, data)
        assert np.all(buf.to_mono() == 0.0)


class TestGenerators:
    def test_sine_peak_and_rms(self):
        buf = sine(1000.0, 1.0, sample_rate=44100, amplitude=0.5)
        assert buf.peak() == pytest.approx(0.5, rel=1e-3)
        assert buf.rms() == pytest.approx(0.5 / np.sqrt(2), rel=1e-3)

    def test_white_noise_seeded(self):
        a = white_noise(0.1, seed=7)
        b = white_noise(0.1, seed=7)
        assert np.array_equal(a.data, b.data)
        c = white_noise(0.1, seed=8)
        assert not np.array_equal(a.data, c.data)

    def test_white_noise_bounded(self):
        buf = white_noise(0.2, amplitude=0.5, seed=1)
        assert buf.peak() <= 0.5


class TestWavIo:
    def test_pcm16_round_trip(self, tmp_path):
        buf = sine(440.0, 0.25, sample_rate=22050, amplitude=0.8)
        path = tmp_path / "clip.wav"
        save_wav(path, buf, encoding="pcm16")
        loaded, encoding = load_wav(path)
        assert encoding == "pcm16"
        assert loaded.sample_rate == 22050
        assert loaded.num_samples == buf.num_samples
        # 16-bit quantization: half an LSB of error at most.
        assert np.max(np.abs(loaded.data - buf.data)) <= 1.0 / 32768

    def test_float32_round_trip(self, tmp_path):
        buf = white_noise(0.1, sample_rate=44100, seed=3, channels=2)
        path = tmp_path / "clip.wav"
        save_wav(path, buf, encoding="float32")
        loaded, encoding = load_wav(path)
        assert encoding == "float32"
        assert loaded.channels == 2
        assert np.max(np.abs(loaded.data - buf.data)) <= 1e-7

    def test_bytes_round_trip(self):
        buf = sine(440.0, 0.1, sample_rate=16000)
        raw = wav_bytes(buf, encoding="float32")
        loaded, encoding = load_wav_bytes(raw)
        assert encoding == "float32"
        assert loaded.sample_rate == 16000
        assert np.max(np.abs(loaded.data - buf.data)) <= 1e-7
