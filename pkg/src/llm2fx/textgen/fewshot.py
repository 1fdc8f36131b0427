"""Shipped few-shot exemplars, five per effect type."""

from __future__ import annotations

import json
from importlib import resources

from ..errors import InvalidParams
from ..params import FX_TYPES, param_class
from .prompts import FewShotExample


def load_fewshot(fx_type: str, k: int | None = None) -> tuple[FewShotExample, ...]:
    """Load the packaged examples for one effect, optionally truncated
    to the first k."""
    if fx_type not in FX_TYPES:
        raise InvalidParams(f"unknown fx_type {fx_type!r}")
    raw = resources.files("llm2fx.textgen.assets").joinpath(f"fewshot_{fx_type}.json").read_text()
    entries = json.loads(raw)
    examples = tuple(
        FewShotExample(
            timbre_word=e["timbre_word"],
            instrument=e["instrument"],
            fx_type=e["fx_type"],
            params=param_class(e["fx_type"]).from_dict(e["params"]),
        )
        for e in entries
    )
    return examples if k is None else examples[:k]
