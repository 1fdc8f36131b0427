"""Parameter-file schema detection shared by the CLI and the service.

A params JSON file either nests its fields under an effect key ("eq",
"reverb", "graphic") or is a flat field map; flat maps are recognized by
exact key-set match against each schema.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import SchemaMismatch
from ..params import EqParams, GraphicEqParams, ReverbParams

PARAM_CLASSES = {"eq": EqParams, "reverb": ReverbParams, "graphic": GraphicEqParams}


def detect_params(data: dict):
    """Map a parsed JSON object to a typed parameter set.

    Raises:
        SchemaMismatch: keys match no schema; the message names each
            candidate schema and what it is missing.
    """
    if not isinstance(data, dict) or not data:
        raise SchemaMismatch("params must be a nonempty JSON object")
    if len(data) == 1:
        label = next(iter(data))
        if label in PARAM_CLASSES and isinstance(data[label], dict):
            return PARAM_CLASSES[label].from_dict(data[label])
    keys = set(data)
    for cls in PARAM_CLASSES.values():
        if keys == set(cls.keys()):
            return cls.from_dict(data)
    gaps = "; ".join(
        f"{label} missing {sorted(set(cls.keys()) - keys)[:3]}"
        for label, cls in PARAM_CLASSES.items())
    raise SchemaMismatch(f"keys match no known schema ({gaps})")


def load_params_file(path: str | Path):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"{path} is not valid JSON: {exc}") from exc
    return detect_params(data)
