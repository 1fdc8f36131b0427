"""Eight-descriptor DSP feature extraction and its prompt serialization.

All spectral quantities come from the magnitude of a single full-length
real FFT; no framing or averaging. RT60 uses the Schroeder backward
integral with a T30 line fit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.fft import rfft

from .audio import AudioBuffer
from .errors import SchemaMismatch, SilentSignal, TooShort

SILENCE_RMS = 1e-9
MIN_SAMPLES = 256

FEATURE_KEYS = [
    "sample_rate",
    "rms_energy",
    "crest_factor",
    "dynamic_spread",
    "spectral_centroid",
    "spectral_flatness",
    "spectral_bandwidth",
    "estimated_rt60",
]


@dataclass(frozen=True)
class DspFeatures:
    """One scalar per descriptor. crest_factor is None only for silent
    signals, where the peak/RMS ratio is undefined."""

    sample_rate: int
    rms_energy: float
    crest_factor: float | None
    dynamic_spread: float
    spectral_centroid: float
    spectral_flatness: float
    spectral_bandwidth: float
    estimated_rt60: float


def extract_features(audio: AudioBuffer) -> DspFeatures:
    """Compute all eight descriptors over the full signal.

    Args:
        audio: Input clip, at least 256 samples; stereo is averaged to
            mono before analysis.

    Returns:
        DspFeatures with every field populated.

    Raises:
        TooShort: fewer than 256 samples.
        SilentSignal: RMS below 1e-9, where crest factor is undefined.
    """
    if audio.num_samples < MIN_SAMPLES:
        raise TooShort(f"need at least {MIN_SAMPLES} samples, got {audio.num_samples}")
    x = audio.to_mono()
    rms = float(np.sqrt(np.mean(x ** 2)))
    if rms < SILENCE_RMS:
        raise SilentSignal("signal RMS below 1e-9")

    mag = np.abs(x)
    crest = float(mag.max() / rms)
    mu = float(mag.mean())
    spread = float(np.sqrt(np.mean((mag - mu) ** 2)))

    spectrum = np.abs(rfft(x))
    freqs = np.fft.rfftfreq(len(x), 1.0 / audio.sample_rate)
    total = float(spectrum.sum())
    centroid = float((freqs * spectrum).sum() / total)
    bandwidth = float(np.sqrt(((freqs - centroid) ** 2 * spectrum).sum() / total))
    # Geometric mean in log domain; the floor keeps zero bins finite.
    log_mean = float(np.mean(np.log(np.maximum(spectrum, 1e-12))))
    flatness = float(math.exp(log_mean) / spectrum.mean())

    try:
        rt60 = estimate_rt60(audio)
    except TooShort:
        rt60 = 0.0

    return DspFeatures(
        sample_rate=audio.sample_rate,
        rms_energy=rms,
        crest_factor=crest,
        dynamic_spread=spread,
        spectral_centroid=centroid,
        spectral_flatness=flatness,
        spectral_bandwidth=bandwidth,
        estimated_rt60=rt60,
    )


def estimate_rt60(ir: AudioBuffer) -> float:
    """Schroeder RT60 from an impulse response or reverberant decay.

    Backward-integrates the squared signal, converts to dB relative to
    the full integral, and fits a least-squares line over the -5 dB to
    -35 dB span; the T30 slope extrapolates to -60 dB.

    Args:
        ir: Decay signal, at least 0.05 s long.

    Returns:
        RT60 in seconds; 0.0 when the decay never reaches -35 dB or the
        fit span holds fewer than two points.

    Raises:
        TooShort: shorter than 0.05 s.
        SilentSignal: no energy to integrate.
    """
    min_n = int(0.05 * ir.sample_rate)
    if ir.num_samples < min_n:
        raise TooShort(f"need at least {min_n} samples for RT60, got {ir.num_samples}")
    x = ir.to_mono()
    if float(np.sqrt(np.mean(x ** 2))) < SILENCE_RMS:
        raise SilentSignal("cannot estimate RT60 of silence")

    edc = np.cumsum(x[::-1] ** 2)[::-1]
    edc_db = 10.0 * np.log10(np.maximum(edc / edc[0], 1e-30))

    below_fit = np.nonzero(edc_db <= -35.0)[0]
    if len(below_fit) == 0:
        return 0.0
    start = int(np.argmax(edc_db <= -5.0))
    end = int(below_fit[0])
    if end - start < 2:
        return 0.0
    t = np.arange(start, end) / ir.sample_rate
    seg = edc_db[start:end]
    slope, _ = np.polyfit(t, seg, 1)
    if slope >= 0.0:
        return 0.0
    return float(-60.0 / slope)


def serialize_features(f: DspFeatures) -> str:
    """Render the canonical prompt block: fixed key order, 2-decimal
    rounding, integer sample_rate. Silent signals omit crest_factor and
    carry a trailing "silent": true marker instead."""
    obj: dict[str, object] = {"sample_rate": int(f.sample_rate)}
    for key in FEATURE_KEYS[1:]:
        value = getattr(f, key)
        if key == "crest_factor" and value is None:
            continue
        obj[key] = round(float(value), 2)
    if f.crest_factor is None:
        obj["silent"] = True
    return json.dumps(obj, indent=4)


def parse_features(text: str) -> DspFeatures:
    """Inverse of serialize_features; accepts any JSON object holding the
    eight keys (crest_factor optional when marked silent)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"feature block is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaMismatch("feature block must be a JSON object")
    required = [k for k in FEATURE_KEYS if k != "crest_factor"]
    missing = [k for k in required if k not in obj]
    if missing:
        raise SchemaMismatch(f"feature block missing keys: {', '.join(missing)}")
    crest = obj.get("crest_factor")
    return DspFeatures(
        sample_rate=int(obj["sample_rate"]),
        rms_energy=float(obj["rms_energy"]),
        crest_factor=None if crest is None else float(crest),
        dynamic_spread=float(obj["dynamic_spread"]),
        spectral_centroid=float(obj["spectral_centroid"]),
        spectral_flatness=float(obj["spectral_flatness"]),
        spectral_bandwidth=float(obj["spectral_bandwidth"]),
        estimated_rt60=float(obj["estimated_rt60"]),
    )
