"""Trial loop: prompt assembly, backend calls, parsing, audit records."""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import (
    AuthMissing,
    BackendUnreachable,
    InvalidParams,
    Llm2FxError,
    MissingKeys,
    NoJsonFound,
    WrongEffect,
)
from ..params import FX_TYPES, ParamSet, param_class
from .backends import Backend, BackendConfig, make_backend
from .parsing import parse_params
from .prompts import ContextConfig, build_system_prompt, build_user_message

DEFAULT_CONCURRENCY = 4


@dataclass(frozen=True)
class GenerationRequest:
    """One (word, instrument, effect) prediction task."""

    timbre_word: str
    instrument: str
    fx_type: str
    context: ContextConfig = field(default_factory=ContextConfig)
    trials: int = 1
    seed: int = 0

    def validate(self) -> None:
        if not self.timbre_word:
            raise InvalidParams("timbre_word must be nonempty")
        if not self.instrument:
            raise InvalidParams("instrument must be nonempty")
        if self.fx_type not in FX_TYPES:
            raise InvalidParams(f"unknown fx_type {self.fx_type!r}")
        if self.trials < 1:
            raise InvalidParams("trials must be >= 1")
        self.context.validate()


@dataclass
class GenerationResult:
    """Outcome of one trial. params is None only when error is set."""

    trial: int
    params: ParamSet | None
    raw_text: str
    prompt_transcript: str
    clamped_fields: list[str]
    latency: float
    error: str | None = None


def trial_seed(seed: int, index: int) -> int:
    """Per-trial seeds are consecutive so a playlist mock cycles its
    sequence exactly once per len(sequence) trials."""
    return seed + index


def generate(
    req: GenerationRequest,
    backend: BackendConfig | Backend,
    concurrency: int = DEFAULT_CONCURRENCY,
) -> list[GenerationResult]:
    """Run req.trials independent completions and parse each one.

    Args:
        req: The prediction task; req.context controls the prompt.
        backend: A BackendConfig (a client is constructed) or any object
            with a complete(system, user, seed) method.
        concurrency: Max in-flight trials.

    Returns:
        One GenerationResult per trial, ordered by trial index. Trials
        that fail after retries carry an error string instead of params;
        the batch itself never aborts on per-trial failures.

    Raises:
        AuthMissing: credential env var unset (configuration, not a
            per-trial condition).
        InvalidParams: malformed request.
    """
    req.validate()
    if isinstance(backend, BackendConfig):
        max_retries = backend.max_retries
        client: Backend = make_backend(backend)
    else:
        max_retries = 2
        client = backend

    sample_rate = 44100
    if req.context.include_features and req.context.features is not None:
        sample_rate = req.context.features.sample_rate
    system = build_system_prompt(req.fx_type, req.instrument, sample_rate=sample_rate)
    user = build_user_message(req.context, req.fx_type, req.timbre_word, req.instrument)
    transcript = f"{system}\n\n{user}"

    def run_trial(index: int) -> GenerationResult:
        start = time.perf_counter()
        raw = ""
        last_error: Llm2FxError | None = None
        for _ in range(max_retries + 1):
            try:
                raw = client.complete(system, user, seed=trial_seed(req.seed, index))
                params, clamped = parse_params(raw, req.fx_type)
                return GenerationResult(
                    trial=index,
                    params=params,
                    raw_text=raw,
                    prompt_transcript=transcript,
                    clamped_fields=clamped,
                    latency=time.perf_counter() - start,
                )
            except AuthMissing:
                raise
            except (BackendUnreachable, NoJsonFound, MissingKeys, WrongEffect) as exc:
                last_error = exc
        return GenerationResult(
            trial=index,
            params=None,
            raw_text=raw,
            prompt_transcript=transcript,
            clamped_fields=[],
            latency=time.perf_counter() - start,
            error=f"{last_error.code}: {last_error}",
        )

    if req.trials == 1 or concurrency <= 1:
        return [run_trial(i) for i in range(req.trials)]
    with ThreadPoolExecutor(max_workers=min(concurrency, req.trials)) as pool:
        return list(pool.map(run_trial, range(req.trials)))


def write_results_jsonl(path: str | Path, req: GenerationRequest,
                        results: list[GenerationResult]) -> None:
    """Persist one audit line per trial: transcript, raw response,
    parsed params, clamp report, error."""
    with open(path, "w") as fh:
        for r in results:
            record = {
                "trial": r.trial,
                "timbre_word": req.timbre_word,
                "instrument": req.instrument,
                "fx_type": req.fx_type,
                "prompt_transcript": r.prompt_transcript,
                "raw_text": r.raw_text,
                "params": None if r.params is None else r.params.to_dict(),
                "clamped_fields": r.clamped_fields,
                "error": r.error,
            }
            fh.write(json.dumps(record) + "\n")


def read_params_jsonl(path: str | Path, fx_type: str) -> list[ParamSet]:
    """Load the successfully parsed parameter sets back from an audit
    file, preserving trial order."""
    cls = param_class(fx_type)
    out: list[ParamSet] = []
    with open(path) as fh:
        for line in fh:
            record = json.loads(line)
            if record.get("params") is not None:
                out.append(cls.from_dict(record["params"]))
    return out
