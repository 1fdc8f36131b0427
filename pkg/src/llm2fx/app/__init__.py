"""CLI entry points and the HTTP service."""

from .config import AppConfig, load_config
from .schemas import detect_params, load_params_file
from .service import TranscriptLog, build_app

__all__ = [
    "AppConfig",
    "TranscriptLog",
    "build_app",
    "detect_params",
    "load_config",
    "load_params_file",
]
