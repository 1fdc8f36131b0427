"""Prompt building, backend clients, and response parsing."""

from .backends import Backend, BackendConfig, HttpChatBackend, MockBackend, make_backend
from .fewshot import load_fewshot
from .generate import (
    GenerationRequest,
    GenerationResult,
    generate,
    read_params_jsonl,
    write_results_jsonl,
)
from .parsing import parse_params
from .prompts import (
    ContextConfig,
    FewShotExample,
    assemble_transcript,
    build_context,
    build_system_prompt,
    build_user_message,
    build_user_query,
)

__all__ = [
    "Backend",
    "BackendConfig",
    "ContextConfig",
    "FewShotExample",
    "GenerationRequest",
    "GenerationResult",
    "HttpChatBackend",
    "MockBackend",
    "assemble_transcript",
    "build_context",
    "build_system_prompt",
    "build_user_message",
    "build_user_query",
    "generate",
    "load_fewshot",
    "make_backend",
    "parse_params",
    "read_params_jsonl",
    "write_results_jsonl",
]
