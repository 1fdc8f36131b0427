"""Effect parameter sets: 6-band parametric EQ, 12-band noise-shaped
reverb, and the fixed 40-band graphic EQ used for ground-truth rendering.

Each type knows its canonical key order (the JSON wire schema), its valid
ranges, and how to clamp out-of-range values field by field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from typing import Union

import numpy as np

from .errors import InvalidParams, SampleRateConflict

GAIN_DB_RANGE = (-24.0, 24.0)
CUTOFF_RANGE = (20.0, 20000.0)
Q_RANGE = (0.1, 10.0)
BAND_GAIN_RANGE = (0.0, 1.0)
DECAY_RANGE = (0.0, 30.0)
MIX_RANGE = (0.0, 1.0)

NUM_REVERB_BANDS = 12
NUM_GRAPHIC_BANDS = 40
GRAPHIC_Q = 4.31


def max_cutoff(sample_rate: int) -> float:
    return min(CUTOFF_RANGE[1], 0.45 * sample_rate)


def _check(name: str, value: float, lo: float, hi: float) -> None:
    if not np.isfinite(value) or not (lo <= value <= hi):
        raise InvalidParams(f"{name}={value} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class EqParams:
    """Six-band parametric EQ: low shelf, four peaking bands, high shelf.

    18 scalars; gains in dB, cutoffs in Hz, q dimensionless.
    """

    low_shelf_gain_db: float = 0.0
    low_shelf_cutoff_freq: float = 100.0
    low_shelf_q: float = 0.71
    band1_gain_db: float = 0.0
    band1_cutoff_freq: float = 400.0
    band1_q: float = 0.71
    band2_gain_db: float = 0.0
    band2_cutoff_freq: float = 1000.0
    band2_q: float = 0.71
    band3_gain_db: float = 0.0
    band3_cutoff_freq: float = 2500.0
    band3_q: float = 0.71
    band4_gain_db: float = 0.0
    band4_cutoff_freq: float = 6000.0
    band4_q: float = 0.71
    high_shelf_gain_db: float = 0.0
    high_shelf_cutoff_freq: float = 8000.0
    high_shelf_q: float = 0.71

    @classmethod
    def keys(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_dict(self) -> dict[str, float]:
        return {k: float(getattr(self, k)) for k in self.keys()}

    @classmethod
    def from_dict(cls, d: dict) -> "EqParams":
        return cls(**{k: float(d[k]) for k in cls.keys()})

    def validate(self, sample_rate: int | None = None) -> None:
        for k, v in self.to_dict().items():
            if k.endswith("gain_db"):
                _check(k, v, *GAIN_DB_RANGE)
            elif k.endswith("cutoff_freq"):
                _check(k, v, *CUTOFF_RANGE)
                if sample_rate is not None and v > max_cutoff(sample_rate):
                    raise SampleRateConflict(
                        f"{k}={v} Hz exceeds {max_cutoff(sample_rate):.0f} Hz "
                        f"allowed at {sample_rate} Hz"
                    )
            else:
                _check(k, v, *Q_RANGE)


@dataclass(frozen=True)
class ReverbParams:
    """Noise-shaped reverb: per-band linear gain and decay time (seconds)
    for 12 log-spaced bands, plus a wet/dry mix fraction. 25 scalars."""

    band_gains: tuple[float, ...] = (0.0,) * NUM_REVERB_BANDS
    band_decays: tuple[float, ...] = (0.1,) * NUM_REVERB_BANDS
    mix: float = 0.0

    @classmethod
    def keys(cls) -> list[str]:
        gains = [f"band{i}_gain" for i in range(NUM_REVERB_BANDS)]
        decays = [f"band{i}_decay" for i in range(NUM_REVERB_BANDS)]
        return gains + decays + ["mix"]

    def to_dict(self) -> dict[str, float]:
        d = {f"band{i}_gain": float(g) for i, g in enumerate(self.band_gains)}
        d.update({f"band{i}_decay": float(t) for i, t in enumerate(self.band_decays)})
        d["mix"] = float(self.mix)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ReverbParams":
        gains = tuple(float(d[f"band{i}_gain"]) for i in range(NUM_REVERB_BANDS))
        decays = tuple(float(d[f"band{i}_decay"]) for i in range(NUM_REVERB_BANDS))
        return cls(band_gains=gains, band_decays=decays, mix=float(d["mix"]))

    def validate(self, sample_rate: int | None = None) -> None:
        if len(self.band_gains) != NUM_REVERB_BANDS or len(self.band_decays) != NUM_REVERB_BANDS:
            raise InvalidParams("reverb requires 12 band gains and 12 band decays")
        for i, g in enumerate(self.band_gains):
            _check(f"band{i}_gain", g, *BAND_GAIN_RANGE)
        for i, t in enumerate(self.band_decays):
            _check(f"band{i}_decay", t, *DECAY_RANGE)
        _check("mix", self.mix, *MIX_RANGE)


@dataclass(frozen=True)
class GraphicEqParams:
    """Fixed-frequency graphic EQ: 40 gains in dB at log-spaced centers
    20 Hz .. 20 kHz, constant Q."""

    gains_db: tuple[float, ...] = (0.0,) * NUM_GRAPHIC_BANDS

    @staticmethod
    def centers() -> np.ndarray:
        return np.geomspace(20.0, 20000.0, NUM_GRAPHIC_BANDS)

    @classmethod
    def keys(cls) -> list[str]:
        return [f"gain{i}_db" for i in range(NUM_GRAPHIC_BANDS)]

    def to_dict(self) -> dict[str, float]:
        return {f"gain{i}_db": float(g) for i, g in enumerate(self.gains_db)}

    @classmethod
    def from_dict(cls, d: dict) -> "GraphicEqParams":
        return cls(gains_db=tuple(float(d[f"gain{i}_db"]) for i in range(NUM_GRAPHIC_BANDS)))

    def validate(self, sample_rate: int | None = None) -> None:
        if len(self.gains_db) != NUM_GRAPHIC_BANDS:
            raise InvalidParams(f"graphic EQ requires {NUM_GRAPHIC_BANDS} gains")
        for i, g in enumerate(self.gains_db):
            _check(f"gain{i}_db", g, *GAIN_DB_RANGE)


ParamSet = Union[EqParams, ReverbParams]

FX_EQ = "eq"
FX_REVERB = "reverb"
FX_TYPES = (FX_EQ, FX_REVERB)


def fx_type_of(params: ParamSet) -> str:
    return FX_EQ if isinstance(params, EqParams) else FX_REVERB


def param_class(fx_type: str):
    if fx_type == FX_EQ:
        return EqParams
    if fx_type == FX_REVERB:
        return ReverbParams
    raise InvalidParams(f"unknown fx type {fx_type!r}")


def field_range(fx_type: str, key: str) -> tuple[float, float]:
    """Clamp range for one serialized field."""
    if fx_type == FX_EQ:
        if key.endswith("gain_db"):
            return GAIN_DB_RANGE
        if key.endswith("cutoff_freq"):
            return CUTOFF_RANGE
        return Q_RANGE
    if key == "mix":
        return MIX_RANGE
    if key.endswith("_gain"):
        return BAND_GAIN_RANGE
    return DECAY_RANGE


def clamp_fields(fx_type: str, values: dict[str, float]) -> tuple[dict[str, float], list[str]]:
    """Clamp every field into its valid range. Returns the clamped mapping
    and the names of fields that moved. Non-finite values snap to the lower
    bound. Idempotent."""
    out: dict[str, float] = {}
    moved: list[str] = []
    for key in param_class(fx_type).keys():
        v = float(values[key])
        lo, hi = field_range(fx_type, key)
        if not np.isfinite(v):
            out[key] = lo
            moved.append(key)
        elif v < lo or v > hi:
            out[key] = min(max(v, lo), hi)
            moved.append(key)
        else:
            out[key] = v
    return out, moved


def params_to_json(params: ParamSet, indent: int = 4) -> str:
    """Canonical JSON text, nested under the effect-type key, full float
    precision (parse -> serialize -> parse round-trips exactly)."""
    return json.dumps({fx_type_of(params): params.to_dict()}, indent=indent)


def random_params(fx_type: str, rng: np.random.Generator, sample_rate: int = 44100) -> ParamSet:
    """Uniform independent draw over each field's valid range."""
    if fx_type == FX_EQ:
        hi_f = max_cutoff(sample_rate)
        vals = {}
        for key in EqParams.keys():
            if key.endswith("gain_db"):
                vals[key] = rng.uniform(*GAIN_DB_RANGE)
            elif key.endswith("cutoff_freq"):
                vals[key] = rng.uniform(CUTOFF_RANGE[0], hi_f)
            else:
                vals[key] = rng.uniform(*Q_RANGE)
        return EqParams.from_dict(vals)
    gains = tuple(rng.uniform(*BAND_GAIN_RANGE) for _ in range(NUM_REVERB_BANDS))
    decays = tuple(rng.uniform(*DECAY_RANGE) for _ in range(NUM_REVERB_BANDS))
    return ReverbParams(band_gains=gains, band_decays=decays, mix=rng.uniform(*MIX_RANGE))
