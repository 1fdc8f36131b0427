"""Audio buffers and WAV file I/O.

All processing is float64 internally, shaped (channels, samples) with
amplitudes nominally in [-1, 1]. WAV files round-trip as 16-bit PCM or
32-bit float, mono or stereo, at any sample rate >= 8 kHz.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
from scipy.io import wavfile

from .errors import InvalidParams

MIN_SAMPLE_RATE = 8000


@dataclass(frozen=True)
class AudioBuffer:
    """Sampled audio: (channels, samples) float array plus its sample rate.

    ``clipped`` records whether a processor had to rescale the signal to
    keep the peak within [-1, 1]; it is metadata, not part of equality.
    """

    sample_rate: int
    data: np.ndarray
    clipped: bool = field(default=False, compare=False)

    def __post_init__(self):
        data = np.atleast_2d(np.asarray(self.data, dtype=np.float64))
        object.__setattr__(self, "data", data)
        if self.sample_rate < MIN_SAMPLE_RATE:
            raise InvalidParams(f"sample_rate must be >= {MIN_SAMPLE_RATE}, got {self.sample_rate}")
        if data.ndim != 2 or data.shape[0] not in (1, 2):
            raise InvalidParams(f"expected 1 or 2 channels, got shape {data.shape}")
        if data.shape[1] < 1:
            raise InvalidParams("audio must contain at least one sample")

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def num_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration(self) -> float:
        return self.num_samples / self.sample_rate

    def to_mono(self) -> np.ndarray:
        """Channel mean as a 1-d array."""
        return self.data.mean(axis=0)

    def peak(self) -> float:
        return float(np.max(np.abs(self.data)))

    def rms(self) -> float:
        return float(np.sqrt(np.mean(self.data**2)))


def sine(freq: float, duration: float, sample_rate: int = 44100, amplitude: float = 1.0,
         channels: int = 1) -> AudioBuffer:
    """Test-tone generator."""
    t = np.arange(int(round(duration * sample_rate))) / sample_rate
    x = amplitude * np.sin(2 * np.pi * freq * t)
    return AudioBuffer(sample_rate, np.tile(x, (channels, 1)))


def white_noise(duration: float, sample_rate: int = 44100, amplitude: float = 0.5,
                seed: int = 0, channels: int = 1) -> AudioBuffer:
    """Seeded white-noise generator."""
    rng = np.random.default_rng(seed)
    n = int(round(duration * sample_rate))
    x = amplitude * rng.uniform(-1.0, 1.0, size=(channels, n))
    return AudioBuffer(sample_rate, x)


def load_wav(path) -> tuple[AudioBuffer, str]:
    """Read a WAV file. Returns (buffer, encoding) with encoding one of
    "pcm16" or "float32" so writers can preserve the source bit depth."""
    rate, data = wavfile.read(path)
    if data.dtype == np.int16:
        encoding = "pcm16"
        x = data.astype(np.float64) / 32768.0
    elif data.dtype == np.int32:
        encoding = "pcm16"
        x = data.astype(np.float64) / 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        encoding = "float32"
        x = data.astype(np.float64)
    else:
        raise InvalidParams(f"unsupported WAV sample format {data.dtype}")
    if x.ndim == 1:
        x = x[None, :]
    else:
        x = x.T  # wavfile uses (samples, channels)
    return AudioBuffer(int(rate), x), encoding


def save_wav(path, audio: AudioBuffer, encoding: str = "float32") -> None:
    """Write a WAV file as 16-bit PCM or 32-bit float."""
    x = audio.data.T
    if x.shape[1] == 1:
        x = x[:, 0]
    if encoding == "pcm16":
        scaled = np.clip(np.round(x * 32768.0), -32768, 32767).astype(np.int16)
        wavfile.write(path, audio.sample_rate, scaled)
    elif encoding == "float32":
        wavfile.write(path, audio.sample_rate, x.astype(np.float32))
    else:
        raise InvalidParams(f"unsupported WAV encoding {encoding!r}")


def wav_bytes(audio: AudioBuffer, encoding: str = "float32") -> bytes:
    """Serialize a buffer to in-memory WAV bytes."""
    buf = io.BytesIO()
    save_wav(buf, audio, encoding)
    return buf.getvalue()


def load_wav_bytes(data: bytes) -> tuple[AudioBuffer, str]:
    return load_wav(io.BytesIO(data))
