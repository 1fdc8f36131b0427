"""Tolerant extraction of parameter objects from model output.

Model text arrives with markdown fences, prose framing, single-quoted
dict literals, or stray keys. The parser finds the first balanced brace
region that parses as a mapping, accepts flat or effect-nested layouts,
reports missing keys, warns on extras, and clamps out-of-range values
instead of rejecting the trial.
"""

from __future__ import annotations

import ast
import json
import logging

from ..errors import MissingKeys, NoJsonFound, WrongEffect
from ..params import FX_EQ, FX_REVERB, ParamSet, clamp_fields, param_class

log = logging.getLogger(__name__)

# Scanning more regions than this means the input is not model output.
MAX_SCANS = 10000


def _balanced_regions(text: str):
    """Yield each top-level {...} span, tolerating quoted braces."""
    scans = 0
    i = 0
    n = len(text)
    while i < n and scans < MAX_SCANS:
        if text[i] != "{":
            i += 1
            continue
        scans += 1
        depth = 0
        quote: str | None = None
        escape = False
        for j in range(i, n):
            c = text[j]
            if quote is not None:
                if escape:
                    escape = False
                elif c == "\\":
                    escape = True
                elif c == quote:
                    quote = None
            elif c in "\"'":
                quote = c
            elif c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
                if depth == 0:
                    yield text[i : j + 1]
                    i = j
                    break
        i += 1


def _try_load(candidate: str) -> dict | None:
    try:
        obj = json.loads(candidate)
        return obj if isinstance(obj, dict) else None
    except (json.JSONDecodeError, RecursionError):
        pass
    try:
        obj = ast.literal_eval(candidate)
        return obj if isinstance(obj, dict) else None
    except (ValueError, SyntaxError, MemoryError, RecursionError, TypeError):
        return None


def _coerce(value) -> float | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            return None
    return None


def parse_params(raw: str, fx_type: str) -> tuple[ParamSet, list[str]]:
    """Parse one model response into validated parameters.

    Args:
        raw: Arbitrary response text.
        fx_type: "eq" or "reverb", the schema the caller asked for.

    Returns:
        (params, clamped_fields): the parameter set after clamping, and
        the names of fields the clamp moved.

    Raises:
        NoJsonFound: no balanced region parses as a mapping.
        WrongEffect: the object carries the other effect's schema.
        MissingKeys: required fields absent (lists them).
    """
    other = FX_REVERB if fx_type == FX_EQ else FX_EQ
    obj: dict | None = None
    for candidate in _balanced_regions(raw):
        obj = _try_load(candidate)
        if obj is not None:
            break
    if obj is None:
        raise NoJsonFound("no JSON object found in response")

    if fx_type in obj and isinstance(obj[fx_type], dict):
        obj = obj[fx_type]
    elif other in obj and isinstance(obj[other], dict):
        raise WrongEffect(f"response contains {other!r} parameters, expected {fx_type!r}")

    expected = param_class(fx_type).keys()
    values: dict[str, float] = {}
    for key in expected:
        if key in obj:
            number = _coerce(obj[key])
            if number is not None:
                values[key] = number
    missing = [k for k in expected if k not in values]
    if missing:
        # A flat object holding the other schema is a wrong effect, not
        # a truncation.
        if all(k in obj for k in param_class(other).keys()):
            raise WrongEffect(f"response keys match {other!r}, expected {fx_type!r}")
        raise MissingKeys(missing, fx_type)

    extras = [k for k in obj if k not in set(expected)]
    if extras:
        log.warning("ignoring %d unexpected keys: %s", len(extras), ", ".join(sorted(extras)[:8]))

    clamped, moved = clamp_fields(fx_type, values)
    return param_class(fx_type).from_dict(clamped), moved
