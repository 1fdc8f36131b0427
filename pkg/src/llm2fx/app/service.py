"""HTTP service: generation, rendering, feature extraction, fixtures.

All request validation raises the package's error types; an exception
handler maps them to JSON bodies {"error": <ErrorName>, "message": ...}
with status 400 (client mistake), 404 (unknown fixture), or 502
(backend failure), so HTTP clients see the same stable codes the
library raises.
"""

from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path

import numpy as np
from fastapi import Body, FastAPI, Form, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from ..audio import load_wav_bytes, wav_bytes
from ..dataset.fixtures import FIXTURE_DURATIONS, fixture_names, make_fixture
from ..eq import apply_eq, apply_graphic_eq, eq_sections, graphic_sections, response_db
from ..errors import (
    BackendUnreachable,
    InvalidParams,
    Llm2FxError,
    MissingFixture,
)
from ..features import extract_features, parse_features, serialize_features
from ..params import EqParams, GraphicEqParams, params_to_json
from ..reverb import apply_reverb
from ..textgen import ContextConfig, GenerationRequest, generate, load_fewshot
from .config import AppConfig
from .schemas import detect_params

_STATUS = {"AuthMissing": 502, "BackendUnreachable": 502, "MissingFixture": 404}
FIXTURE_SAMPLE_RATE = 44100


class TranscriptLog:
    """Append-only prompt/response log; ids are content hashes so
    replaying a request is idempotent."""

    def __init__(self, path: Path):
        self.path = path
        self._lock = threading.Lock()
        self._ids: set[str] | None = None

    def _load_ids(self) -> set[str]:
        if self._ids is None:
            self._ids = set()
            if self.path.exists():
                with open(self.path) as fh:
                    for line in fh:
                        try:
                            self._ids.add(json.loads(line)["id"])
                        except (json.JSONDecodeError, KeyError):
                            continue
        return self._ids

    def append(self, record: dict) -> str:
        digest = hashlib.sha256(
            (record["prompt_transcript"] + "\x1f" + record["raw_text"]).encode()
        ).hexdigest()[:16]
        with self._lock:
            if digest not in self._load_ids():
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a") as fh:
                    fh.write(json.dumps({"id": digest, **record}) + "\n")
                self._ids.add(digest)
        return digest

    def find(self, transcript_id: str) -> dict | None:
        if not self.path.exists():
            return None
        with open(self.path) as fh:
            for line in fh:
                try:
                    record = json.loads(line)
                except json.JSONDecodeError:
                    continue
                if record.get("id") == transcript_id:
                    return record
        return None


def _error_response(exc: Llm2FxError) -> JSONResponse:
    return JSONResponse(
        status_code=_STATUS.get(exc.code, 400),
        content={"error": exc.code, "message": str(exc)},
    )


def _require(payload: dict, key: str) -> str:
    value = payload.get(key)
    if not isinstance(value, str) or not value:
        raise InvalidParams(f"field {key!r} must be a nonempty string")
    return value


def _response_curve(params, sample_rate: int) -> dict:
    freqs = np.geomspace(20.0, 0.45 * sample_rate, 64)
    if isinstance(params, EqParams):
        sos = eq_sections(params, sample_rate)
    else:
        sos = graphic_sections(params, sample_rate)
    db = response_db(sos, freqs, sample_rate)
    return {"freq_hz": [round(float(f), 2) for f in freqs],
            "gain_db": [round(float(d), 4) for d in db]}


def build_app(config: AppConfig | None = None) -> FastAPI:
    config = config or AppConfig()
    config.validate()
    app = FastAPI(title="llm2fx")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"], expose_headers=["X-Render-Metadata"],
    )
    log = TranscriptLog(Path(config.data_dir) / "transcripts.jsonl")

    @app.exception_handler(Llm2FxError)
    async def _handle(request: Request, exc: Llm2FxError):
        return _error_response(exc)

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/api/fixtures")
    def fixtures() -> list[dict]:
        return [
            {"name": name, "duration": FIXTURE_DURATIONS[name],
             "sample_rate": FIXTURE_SAMPLE_RATE, "url": f"/api/fixtures/{name}"}
            for name in fixture_names()
        ]

    @app.get("/api/fixtures/{name}")
    def fixture_wav(name: str) -> Response:
        if name not in fixture_names():
            raise MissingFixture(f"no fixture named {name!r}")
        data = wav_bytes(make_fixture(name, FIXTURE_SAMPLE_RATE), encoding="float32")
        return Response(content=data, media_type="audio/wav")

    @app.post("/api/generate")
    def generate_params(payload: dict = Body(...)) -> dict:
        word = _require(payload, "word")
        instrument = _require(payload, "instrument")
        fx_type = _require(payload, "fx_type")
        seed = int(payload.get("seed", config.seed))
        features = None
        if payload.get("features") is not None:
            features = parse_features(json.dumps(payload["features"]))
        context = ContextConfig(
            include_features=features is not None,
            features=features,
            include_code=bool(payload.get("code", False)),
            fewshot=load_fewshot(fx_type) if payload.get("fewshot", False) else (),
        )
        req = GenerationRequest(timbre_word=word, instrument=instrument,
                                fx_type=fx_type, context=context, trials=1, seed=seed)
        result = generate(req, config.backend, concurrency=config.parallelism)[0]
        if result.params is None:
            code, _, message = (result.error or "BackendUnreachable:").partition(":")
            raise BackendUnreachable(f"generation failed ({code.strip()}):{message}")
        transcript_id = log.append({
            "word": word, "instrument": instrument, "fx_type": fx_type,
            "seed": seed, "prompt_transcript": result.prompt_transcript,
            "raw_text": result.raw_text,
            "params": result.params.to_dict(),
        })
        return {
            "params": json.loads(params_to_json(result.params)),
            "clamped_fields": result.clamped_fields,
            "transcript_id": transcript_id,
        }

    @app.get("/api/transcripts/{transcript_id}")
    def transcript(transcript_id: str) -> dict:
        record = log.find(transcript_id)
        if record is None:
            raise MissingFixture(f"no transcript {transcript_id!r}")
        return record

    @app.post("/api/render")
    async def render(file: UploadFile, params: str = Form(...),
                     seed: int = Form(0)) -> Response:
        audio, encoding = load_wav_bytes(await file.read())
        try:
            parsed = detect_params(json.loads(params))
        except json.JSONDecodeError as exc:
            raise InvalidParams(f"params form field is not valid JSON: {exc}") from exc
        if isinstance(parsed, EqParams):
            wet = apply_eq(audio, parsed)
        elif isinstance(parsed, GraphicEqParams):
            wet = apply_graphic_eq(audio, parsed)
        else:
            wet = apply_reverb(audio, parsed, seed=seed)
        metadata: dict = {"clipped": wet.clipped, "seed": seed}
        if isinstance(parsed, (EqParams, GraphicEqParams)):
            metadata["fx_type"] = "eq" if isinstance(parsed, EqParams) else "graphic"
            metadata["response_curve"] = _response_curve(parsed, audio.sample_rate)
        else:
            metadata["fx_type"] = "reverb"
        return Response(
            content=wav_bytes(wet, encoding=encoding),
            media_type="audio/wav",
            headers={"X-Render-Metadata": json.dumps(metadata)},
        )

    @app.post("/api/features")
    async def features(file: UploadFile) -> Response:
        audio, _ = load_wav_bytes(await file.read())
        return Response(content=serialize_features(extract_features(audio)),
                        media_type="application/json")

    return app


def serve(config: AppConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    config.validate()
    uvicorn.run(build_app(config), host=config.host, port=config.port)
