"""Parametric and graphic equalizers built from RBJ cookbook biquads.

The 6-band parametric EQ cascades low shelf, four peaking bands, high
shelf; the graphic EQ cascades 40 constant-Q peaking sections at fixed
log-spaced centers. Both preserve channel count and length exactly and
never rescale (EQ is linear; clipping policy lives in the reverb path).
"""

from __future__ import annotations

import numpy as np
import scipy.signal

from .audio import AudioBuffer
from .params import GRAPHIC_Q, EqParams, GraphicEqParams


def peaking(f0: float, q: float, gain_db: float, sample_rate: float) -> np.ndarray:
    """Peaking biquad as a normalized [b0 b1 b2 a0 a1 a2] sos row."""
    A = 10.0 ** (gain_db / 40.0)
    w0 = 2.0 * np.pi * f0 / sample_rate
    alpha = np.sin(w0) / (2.0 * q)
    cosw = np.cos(w0)
    b = np.array([1.0 + alpha * A, -2.0 * cosw, 1.0 - alpha * A])
    a = np.array([1.0 + alpha / A, -2.0 * cosw, 1.0 - alpha / A])
    return np.concatenate([b / a[0], a / a[0]])


def low_shelf(f0: float, q: float, gain_db: float, sample_rate: float) -> np.ndarray:
    A = 10.0 ** (gain_db / 40.0)
    w0 = 2.0 * np.pi * f0 / sample_rate
    alpha = np.sin(w0) / (2.0 * q)
    cosw = np.cos(w0)
    sq = 2.0 * np.sqrt(A) * alpha
    b = np.array([
        A * ((A + 1) - (A - 1) * cosw + sq),
        2 * A * ((A - 1) - (A + 1) * cosw),
        A * ((A + 1) - (A - 1) * cosw - sq),
    ])
    a = np.array([
        (A + 1) + (A - 1) * cosw + sq,
        -2 * ((A - 1) + (A + 1) * cosw),
        (A + 1) + (A - 1) * cosw - sq,
    ])
    return np.concatenate([b / a[0], a / a[0]])


def high_shelf(f0: float, q: float, gain_db: float, sample_rate: float) -> np.ndarray:
    A = 10.0 ** (gain_db / 40.0)
    w0 = 2.0 * np.pi * f0 / sample_rate
    alpha = np.sin(w0) / (2.0 * q)
    cosw = np.cos(w0)
    sq = 2.0 * np.sqrt(A) * alpha
    b = np.array([
        A * ((A + 1) + (A - 1) * cosw + sq),
        -2 * A * ((A - 1) + (A + 1) * cosw),
        A * ((A + 1) + (A - 1) * cosw - sq),
    ])
    a = np.array([
        (A + 1) - (A - 1) * cosw + sq,
        2 * ((A - 1) - (A + 1) * cosw),
        (A + 1) - (A - 1) * cosw - sq,
    ])
    return np.concatenate([b / a[0], a / a[0]])


def eq_sections(params: EqParams, sample_rate: float) -> np.ndarray:
    """Cascade for apply_eq: low shelf, peaks in ascending field order,
    high shelf. Shape (6, 6) sos array."""
    rows = [low_shelf(params.low_shelf_cutoff_freq, params.low_shelf_q,
                      params.low_shelf_gain_db, sample_rate)]
    for i in (1, 2, 3, 4):
        rows.append(peaking(
            getattr(params, f"band{i}_cutoff_freq"),
            getattr(params, f"band{i}_q"),
            getattr(params, f"band{i}_gain_db"),
            sample_rate,
        ))
    rows.append(high_shelf(params.high_shelf_cutoff_freq, params.high_shelf_q,
                           params.high_shelf_gain_db, sample_rate))
    return np.stack(rows)


def graphic_sections(params: GraphicEqParams, sample_rate: float) -> np.ndarray:
    """Cascade of 40 constant-Q peaking sections; centers above the valid
    cutoff for this sample rate are skipped (their gain cannot act below
    Nyquist)."""
    limit = 0.45 * sample_rate
    rows = [
        peaking(c, GRAPHIC_Q, g, sample_rate)
        for c, g in zip(GraphicEqParams.centers(), params.gains_db)
        if c <= limit
    ]
    return np.stack(rows)


def apply_eq(audio: AudioBuffer, params: EqParams) -> AudioBuffer:
    """Run the 6-band parametric cascade over every channel."""
    params.validate(audio.sample_rate)
    sos = eq_sections(params, audio.sample_rate)
    out = scipy.signal.sosfilt(sos, audio.data, axis=1)
    return AudioBuffer(audio.sample_rate, out)


def apply_graphic_eq(audio: AudioBuffer, params: GraphicEqParams) -> AudioBuffer:
    """Run the 40-band graphic cascade over every channel."""
    params.validate(audio.sample_rate)
    sos = graphic_sections(params, audio.sample_rate)
    out = scipy.signal.sosfilt(sos, audio.data, axis=1)
    return AudioBuffer(audio.sample_rate, out)


def response_db(sos: np.ndarray, freqs: np.ndarray, sample_rate: float) -> np.ndarray:
    """Log-magnitude response of an sos cascade at the given frequencies."""
    w = 2.0 * np.pi * np.asarray(freqs, dtype=np.float64) / sample_rate
    z1 = np.exp(-1j * w)
    z2 = z1 * z1
    total = np.zeros(len(w))
    for row in np.atleast_2d(sos):
        b0, b1, b2, a0, a1, a2 = row
        h = (b0 + b1 * z1 + b2 * z2) / (a0 + a1 * z1 + a2 * z2)
        total += 20.0 * np.log10(np.maximum(np.abs(h), 1e-12))
    return total
