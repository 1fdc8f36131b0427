"""Shipped dry clips: guitar (10 s), drums (15 s), piano (20 s).

The clips are synthesized deterministically rather than stored as WAV
blobs, so the repo stays small and every checkout renders bit-identical
fixtures. Each synthesis is a pure function of (name, sample_rate).
"""

from __future__ import annotations

import functools
import zlib
from pathlib import Path

import numpy as np

from ..audio import AudioBuffer, save_wav
from ..errors import MissingFixture

FIXTURE_DURATIONS = {"guitar": 10.0, "drums": 15.0, "piano": 20.0}


def fixture_names() -> tuple[str, ...]:
    return tuple(sorted(FIXTURE_DURATIONS))


def _rng(name: str) -> np.random.Generator:
    return np.random.default_rng(zlib.crc32(name.encode()))


def _pluck(freq: float, duration: float, sr: int, rng: np.random.Generator) -> np.ndarray:
    """Karplus-Strong string, iterated period by period."""
    period = max(2, round(sr / freq))
    n = int(duration * sr)
    buf = rng.uniform(-1.0, 1.0, period)
    out = np.empty(((n // period) + 2) * period)
    out[:period] = buf
    damp = 0.996
    for k in range(1, (n // period) + 2):
        buf = damp * 0.5 * (buf + np.roll(buf, 1))
        out[k * period:(k + 1) * period] = buf
    return out[:n]


def _guitar(sr: int) -> np.ndarray:
    rng = _rng("guitar")
    n = int(FIXTURE_DURATIONS["guitar"] * sr)
    out = np.zeros(n)
    notes = [82.41, 110.0, 146.83, 196.0, 246.94, 329.63, 196.0, 146.83]
    step = 1.25
    for i, freq in enumerate(notes):
        start = int(i * step * sr)
        length = min(int(2.5 * sr), n - start)
        out[start:start + length] += _pluck(freq, length / sr, sr, rng)
    return out


def _tone_burst(freq_start: float, freq_end: float, duration: float,
                decay: float, sr: int) -> np.ndarray:
    t = np.arange(int(duration * sr)) / sr
    freq = freq_start + (freq_end - freq_start) * (t / duration)
    phase = 2 * np.pi * np.cumsum(freq) / sr
    return np.sin(phase) * np.exp(-t / decay)


def _noise_burst(duration: float, decay: float, sr: int,
                 rng: np.random.Generator, tilt: float = 0.0) -> np.ndarray:
    n = int(duration * sr)
    t = np.arange(n) / sr
    noise = rng.standard_normal(n)
    if tilt:
        # First difference brightens the burst (hi-hat voicing).
        noise = np.diff(noise, prepend=0.0) * tilt + noise * (1 - tilt)
    return noise * np.exp(-t / decay)


def _drums(sr: int) -> np.ndarray:
    rng = _rng("drums")
    n = int(FIXTURE_DURATIONS["drums"] * sr)
    out = np.zeros(n)
    beat = 0.5  # 120 BPM
    num_beats = int(FIXTURE_DURATIONS["drums"] / beat)

    def add(event: np.ndarray, start_s: float, level: float) -> None:
        start = int(start_s * sr)
        seg = event[:max(0, n - start)]
        out[start:start + len(seg)] += level * seg

    for b in range(num_beats):
        t0 = b * beat
        if b % 2 == 0:
            add(_tone_burst(55.0, 40.0, 0.3, 0.12, sr), t0, 0.9)
        else:
            body = _tone_burst(185.0, 180.0, 0.2, 0.06, sr)
            snap = _noise_burst(0.2, 0.07, sr, rng)
            add(body + 0.8 * snap, t0, 0.6)
        for half in (0.0, 0.25):
            add(_noise_burst(0.08, 0.025, sr, rng, tilt=0.9), t0 + half * 2 * beat / 2, 0.25)
    return out


def _piano_note(freq: float, duration: float, sr: int) -> np.ndarray:
    t = np.arange(int(duration * sr)) / sr
    out = np.zeros_like(t)
    for k in range(1, 9):
        partial = k * freq * (1 + 0.0004 * k * k)
        if partial >= sr / 2:
            break
        out += (1.0 / k ** 1.5) * np.sin(2 * np.pi * partial * t) * np.exp(-t * k / 3.0)
    attack = min(len(t), int(0.005 * sr))
    out[:attack] *= np.linspace(0, 1, attack)
    return out


def _piano(sr: int) -> np.ndarray:
    n = int(FIXTURE_DURATIONS["piano"] * sr)
    out = np.zeros(n)
    chords = [
        (130.81, 164.81, 196.00, 261.63),
        (110.00, 130.81, 164.81, 220.00),
        (87.31, 110.00, 130.81, 174.61),
        (98.00, 123.47, 146.83, 196.00),
    ]
    step = 2.5
    for i in range(int(FIXTURE_DURATIONS["piano"] / step)):
        start = int(i * step * sr)
        length = min(int(3.0 * sr), n - start)
        for j, freq in enumerate(chords[i % len(chords)]):
            note = _piano_note(freq, length / sr, sr)
            offset = min(int(0.02 * j * sr), length)
            out[start + offset:start + length] += note[:length - offset]
    return out


_SYNTHS = {"guitar": _guitar, "drums": _drums, "piano": _piano}


@functools.lru_cache(maxsize=16)
def make_fixture(name: str, sample_rate: int = 44100) -> AudioBuffer:
    """Render one named dry clip. Cached; treat the buffer as read-only."""
    if name not in _SYNTHS:
        raise MissingFixture(f"no fixture named {name!r}; have {fixture_names()}")
    samples = _SYNTHS[name](sample_rate)
    samples = 0.7 * samples / np.max(np.abs(samples))
    return AudioBuffer(sample_rate=sample_rate, data=samples[np.newaxis, :])


def write_fixture_wavs(directory: str | Path, sample_rate: int = 44100) -> dict[str, Path]:
    """Materialize every fixture as float32 WAV; returns name -> path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name in fixture_names():
        path = directory / f"{name}.wav"
        save_wav(path, make_fixture(name, sample_rate), encoding="float32")
        paths[name] = path
    return paths
