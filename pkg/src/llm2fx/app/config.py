"""Application settings: backend selection, data directory, seeds.

Settings come from an optional JSON config file with environment-variable
overrides. The API key is only ever read from the environment, never
from a file or flag, so it cannot leak into shell history or configs.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..errors import InvalidParams
from ..textgen.backends import DEFAULT_API_KEY_ENV, BackendConfig

ENV_BASE_URL = "LLM2FX_BASE_URL"
ENV_MODEL = "LLM2FX_MODEL"
ENV_API_KEY = DEFAULT_API_KEY_ENV


@dataclass(frozen=True)
class AppConfig:
    backend: BackendConfig = field(default_factory=BackendConfig)
    data_dir: Path = Path("llm2fx-data")
    seed: int = 0
    parallelism: int = 4
    listen_addr: str = "127.0.0.1:8000"

    def validate(self) -> None:
        self.backend.validate()
        if self.parallelism < 1:
            raise InvalidParams("parallelism must be >= 1")
        host, _, port = self.listen_addr.partition(":")
        if not host or not port.isdigit():
            raise InvalidParams(f"listen_addr must be host:port, got {self.listen_addr!r}")

    @property
    def host(self) -> str:
        return self.listen_addr.partition(":")[0]

    @property
    def port(self) -> int:
        return int(self.listen_addr.partition(":")[2])


def load_config(path: str | Path | None = None,
                env: dict[str, str] | None = None) -> AppConfig:
    """Build settings from an optional JSON file plus the environment.

    Setting LLM2FX_BASE_URL switches the backend to the HTTP client;
    otherwise the offline mock is used.
    """
    env = dict(os.environ if env is None else env)
    config = AppConfig()
    if path is not None:
        raw = json.loads(Path(path).read_text())
        backend = BackendConfig(**raw.pop("backend", {}))
        if "data_dir" in raw:
            raw["data_dir"] = Path(raw["data_dir"])
        config = AppConfig(backend=backend, **raw)

    base_url = env.get(ENV_BASE_URL, "")
    if base_url:
        config = replace(config, backend=replace(
            config.backend,
            kind="http_chat",
            endpoint_url=base_url,
            model_name=env.get(ENV_MODEL, config.backend.model_name),
        ))
    config.validate()
    return config
