"""Noise-shaped reverberation.

The impulse response starts as seeded white noise, gets partitioned in
the FFT domain into 12 contiguous log-spaced frequency bands, and each
band is shaped in time by an exponential envelope whose -60 dB point is
that band's decay parameter. Band gains weight the sum, the result is
L2-normalized, and the wet path is plain FFT convolution mixed against
the dry signal.
"""

from __future__ import annotations

import numpy as np
from scipy.fft import irfft, rfft
from scipy.signal import fftconvolve

from .audio import AudioBuffer
from .params import NUM_REVERB_BANDS, ReverbParams

# Band edges: 13 log-spaced points from 31.25 Hz up to 16 kHz (or just
# below Nyquist when the sample rate cannot reach 16 kHz).
BAND_LO = 31.25
BAND_HI = 16000.0

# Bands decaying faster than this contribute nothing audible and their
# envelopes underflow, so they are skipped outright.
MIN_DECAY = 1e-3


def band_edges(sample_rate: int) -> np.ndarray:
    hi = min(BAND_HI, sample_rate / 2.0)
    return np.geomspace(BAND_LO, hi, NUM_REVERB_BANDS + 1)


def ir_length(params: ReverbParams, sample_rate: int) -> int:
    """IR sample count: 1.2x the longest decay, clamped to [0.1 s, 10 s]."""
    max_decay = max(params.band_decays)
    n = int(np.ceil(1.2 * max_decay * sample_rate))
    return int(np.clip(n, sample_rate // 10, 10 * sample_rate))


def render_reverb_ir(
    params: ReverbParams,
    sample_rate: int,
    seed: int = 0,
    channels: int = 1,
) -> AudioBuffer:
    """Render the impulse response for one parameter set.

    Args:
        params: Validated reverb parameters (12 gains, 12 decays, mix).
        sample_rate: Output rate in Hz.
        seed: Noise seed; fixed seed gives a bit-identical IR.
        channels: 1 or 2; channels draw independent noise from one stream.

    Returns:
        AudioBuffer holding the L2-normalized IR, or silence if every
        band is inactive.
    """
    params.validate(sample_rate)
    n = ir_length(params, sample_rate)
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((channels, n))
    spectrum = rfft(noise, axis=1)
    freqs = np.fft.rfftfreq(n, 1.0 / sample_rate)
    edges = band_edges(sample_rate)
    t = np.arange(n) / sample_rate

    out = np.zeros((channels, n))
    active = False
    for b in range(NUM_REVERB_BANDS):
        gain = params.band_gains[b]
        decay = params.band_decays[b]
        if gain == 0.0 or decay <= MIN_DECAY:
            continue
        lo, hi = edges[b], edges[b + 1]
        # Half-open bins [lo, hi); the final band keeps its upper edge.
        upper = freqs <= hi if b == NUM_REVERB_BANDS - 1 else freqs < hi
        mask = (freqs >= lo) & upper
        if not mask.any():
            continue
        banded = irfft(spectrum * mask, n=n, axis=1)
        envelope = 10.0 ** (-3.0 * t / decay)
        out += gain * banded * envelope
        active = True

    if not active:
        return AudioBuffer(sample_rate, out)
    norm = np.sqrt(np.sum(out ** 2))
    return AudioBuffer(sample_rate, out / norm)


def apply_reverb(audio: AudioBuffer, params: ReverbParams, seed: int = 0) -> AudioBuffer:
    """Wet/dry mix y = (1 - mix) * x + mix * (x conv ir), truncated to the
    input length. If the mix exceeds [-1, 1] the whole output is rescaled
    by the peak and the result is flagged clipped."""
    params.validate(audio.sample_rate)
    ir = render_reverb_ir(params, audio.sample_rate, seed=seed, channels=1)
    kernel = ir.data[0]
    wet = fftconvolve(audio.data, kernel[None, :], mode="full", axes=1)
    wet = wet[:, : audio.num_samples]
    mixed = (1.0 - params.mix) * audio.data + params.mix * wet
    peak = float(np.max(np.abs(mixed))) if mixed.size else 0.0
    if peak > 1.0:
        return AudioBuffer(audio.sample_rate, mixed / peak, clipped=True)
    return AudioBuffer(audio.sample_rate, mixed)
