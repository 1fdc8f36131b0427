"""Language-model backends: a generic HTTP chat-completion client and a
deterministic offline mock.

The mock recovers (timbre_word, instrument, fx_type) from the fixed
query template in the user message, so it plugs into the same interface
as a real model without extra plumbing.
"""

from __future__ import annotations

import json
import os
import re
import zlib
from dataclasses import dataclass
from typing import Mapping, Protocol

import httpx
import numpy as np

from ..errors import AuthMissing, BackendUnreachable, InvalidParams
from ..params import (
    FX_REVERB,
    EqParams,
    ParamSet,
    ReverbParams,
    clamp_fields,
    fx_type_of,
    random_params,
)

DEFAULT_API_KEY_ENV = "LLM2FX_API_KEY"

# Matches both query templates: the reverb one is lowercase with a
# plural "effects", the EQ one capitalized and singular.
QUERY_RE = re.compile(
    r"[Pp]lease design a (?P<fx>eq|reverb) audio effects? for a "
    r"(?P<word>.+) (?P<instrument>\S+) sound\.",
)


@dataclass(frozen=True)
class BackendConfig:
    """Connection and sampling settings for one backend."""

    kind: str = "mock"
    endpoint_url: str = ""
    model_name: str = ""
    api_key_env: str = DEFAULT_API_KEY_ENV
    temperature: float = 0.7
    timeout: float = 30.0
    max_retries: int = 2

    def validate(self) -> None:
        if self.kind not in ("http_chat", "mock"):
            raise InvalidParams(f"unknown backend kind {self.kind!r}")
        if self.kind == "http_chat" and (not self.endpoint_url or not self.model_name):
            raise InvalidParams("http_chat backend requires endpoint_url and model_name")
        if self.temperature < 0:
            raise InvalidParams("temperature must be >= 0")


class Backend(Protocol):
    def complete(self, system: str, user: str, seed: int) -> str: ...


class HttpChatBackend:
    """POST {endpoint_url}/chat/completions with [system, user] messages
    and a bearer token read from the configured environment variable."""

    def __init__(self, config: BackendConfig):
        config.validate()
        self.config = config
        self._client = httpx.Client(timeout=config.timeout)

    def complete(self, system: str, user: str, seed: int) -> str:
        del seed  # sampling diversity comes from backend temperature
        api_key = os.environ.get(self.config.api_key_env, "")
        if not api_key:
            raise AuthMissing(f"environment variable {self.config.api_key_env} is not set")
        url = self.config.endpoint_url.rstrip("/") + "/chat/completions"
        payload = {
            "model": self.config.model_name,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
            "temperature": self.config.temperature,
        }
        try:
            response = self._client.post(
                url, json=payload, headers={"Authorization": f"Bearer {api_key}"})
        except httpx.HTTPError as exc:
            raise BackendUnreachable(f"request failed: {exc}") from exc
        if response.status_code != 200:
            raise BackendUnreachable(
                f"backend returned HTTP {response.status_code}: {response.text[:200]}")
        try:
            return response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError, json.JSONDecodeError) as exc:
            raise BackendUnreachable(f"malformed completion envelope: {exc}") from exc


# Fallback bases when a (word, instrument, fx) has no canned answer; a
# word-keyed jitter differentiates words on top of these.
_BASE_REVERB = ReverbParams(
    band_gains=(0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 0.9),
    band_decays=(3.0, 2.5, 2.0, 1.5, 1.2, 1.0, 0.8, 0.6, 0.4, 0.3, 0.2, 0.1),
    mix=0.7,
)
_BASE_EQ = EqParams(
    low_shelf_gain_db=2.0, band1_gain_db=1.0, band2_gain_db=-0.5,
    band3_gain_db=1.5, band4_gain_db=0.5, high_shelf_gain_db=1.0,
)


def _stable_seed(parts: tuple, seed: int) -> int:
    text = "\x1f".join(str(p) for p in parts)
    return (zlib.crc32(text.encode()) << 32) ^ (seed & 0xFFFFFFFF)


class MockBackend:
    """Offline stand-in returning JSON parameter objects.

    Modes, checked in order:
      echo      -- every completion is one fixed parameter set, full
                   precision.
      playlist  -- (word, instrument, fx) maps to a sequence of sets;
                   the per-trial seed selects seed % len, so consecutive
                   trial seeds cycle the sequence exactly.
      random    -- uniform independent draw over every field range.
      jitter    -- canned or built-in base answer with seeded uniform
                   jitter of +-10% per field, so trials form a spread.

    All modes are pure functions of (user message, seed): lock-free and
    deterministic under concurrent trials.
    """

    def __init__(
        self,
        canned: Mapping[tuple[str, str, str], ParamSet] | None = None,
        playlist: Mapping[tuple[str, str, str], tuple[ParamSet, ...]] | None = None,
        echo: ParamSet | None = None,
        random_mode: bool = False,
        jitter: float = 0.1,
        wrap: str = "{json}",
    ):
        self.canned = dict(canned or {})
        self.playlist = {k: tuple(v) for k, v in (playlist or {}).items()}
        self.echo = echo
        self.random_mode = random_mode
        self.jitter = jitter
        self.wrap = wrap

    def _base(self, word: str, instrument: str, fx_type: str) -> ParamSet:
        key = (word, instrument, fx_type)
        if key in self.canned:
            return self.canned[key]
        return _BASE_REVERB if fx_type == FX_REVERB else _BASE_EQ

    def _emit(self, fx_type: str, values: dict[str, float]) -> str:
        return self.wrap.format(json=json.dumps({fx_type: values}))

    def complete(self, system: str, user: str, seed: int) -> str:
        del system
        if self.echo is not None:
            return self._emit(fx_type_of(self.echo), self.echo.to_dict())
        match = None
        for match in QUERY_RE.finditer(user):
            pass  # the last match is the live query; earlier ones are few-shot
        if match is None:
            raise BackendUnreachable("mock could not find a query in the user message")
        word, instrument, fx_type = match["word"], match["instrument"], match["fx"]

        key = (word, instrument, fx_type)
        if key in self.playlist:
            sets = self.playlist[key]
            return self._emit(fx_type, sets[seed % len(sets)].to_dict())
        if self.random_mode:
            rng = np.random.default_rng(_stable_seed(key, seed))
            drawn = random_params(fx_type, rng)
            return self._emit(fx_type, drawn.to_dict())
        base = self._base(word, instrument, fx_type).to_dict()
        rng = np.random.default_rng(_stable_seed(key, seed))
        jittered = {
            k: v * (1.0 + rng.uniform(-self.jitter, self.jitter))
            for k, v in base.items()
        }
        clamped, _ = clamp_fields(fx_type, jittered)
        return self._emit(fx_type, {k: round(v, 4) for k, v in clamped.items()})


def make_backend(config: BackendConfig) -> Backend:
    config.validate()
    if config.kind == "http_chat":
        return HttpChatBackend(config)
    return MockBackend()
