"""Text-driven audio effect control.

Maps natural-language timbre words ("warm", "underwater") to parametric
EQ and reverb settings through a language-model backend, renders them,
and scores the results against crowd-sourced references.
"""

from .audio import AudioBuffer, load_wav, load_wav_bytes, save_wav, wav_bytes
from .eq import apply_eq, apply_graphic_eq
from .errors import Llm2FxError
from .features import DspFeatures, extract_features, parse_features, serialize_features
from .params import (
    EqParams,
    GraphicEqParams,
    ParamSet,
    ReverbParams,
    params_to_json,
)
from .reverb import apply_reverb

__version__ = "0.1.0"

__all__ = [
    "AudioBuffer",
    "DspFeatures",
    "EqParams",
    "GraphicEqParams",
    "Llm2FxError",
    "ParamSet",
    "ReverbParams",
    "apply_eq",
    "apply_graphic_eq",
    "apply_reverb",
    "extract_features",
    "load_wav",
    "load_wav_bytes",
    "params_to_json",
    "parse_features",
    "save_wav",
    "serialize_features",
    "wav_bytes",
]
