"""HTTP service tests: endpoint contracts, error codes, statelessness."""

import io
import json
from dataclasses import replace

import numpy as np
import pytest
from fastapi.testclient import TestClient

from llm2fx.app.config import AppConfig
from llm2fx.app.service import build_app
from llm2fx.audio import load_wav_bytes, wav_bytes, white_noise
from llm2fx.features import extract_features, serialize_features
from llm2fx.params import EqParams, GraphicEqParams, ReverbParams


@pytest.fixture
def client(tmp_path):
    config = AppConfig(data_dir=tmp_path / "data")
    return TestClient(build_app(config))


@pytest.fixture
def dry_wav() -> bytes:
    return wav_bytes(white_noise(0.4, sample_rate=22050, seed=4))


def post_render(client, wav: bytes, params: dict, seed: int = 0):
    return client.post(
        "/api/render",
        files={"file": ("in.wav", io.BytesIO(wav), "audio/wav")},
        data={"params": json.dumps(params), "seed": str(seed)},
    )


class TestHealthAndFixtures:
    def test_health(self, client):
        response = client.get("/api/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok"}

    def test_fixture_listing(self, client):
        listing = client.get("/api/fixtures").json()
        byname = {f["name"]: f for f in listing}
        assert set(byname) == {"guitar", "drums", "piano"}
        assert byname["guitar"]["duration"] == 10.0
        assert byname["drums"]["duration"] == 15.0
        for entry in listing:
            assert entry["url"] == f"/api/fixtures/{entry['name']}"

    def test_fixture_download_decodes(self, client):
        response = client.get("/api/fixtures/guitar")
        assert response.status_code == 200
        assert response.headers["content-type"] == "audio/wav"
        buf, encoding = load_wav_bytes(response.content)
        assert encoding == "float32"
        assert buf.duration == pytest.approx(10.0)

    def test_unknown_fixture_404(self, client):
        response = client.get("/api/fixtures/kazoo")
        assert response.status_code == 404
        body = response.json()
        assert body["error"] == "MissingFixture"
        assert "message" in body


class TestGenerate:
    def test_returns_valid_params(self, client):
        response = client.post("/api/generate", json={
            "word": "warm", "instrument": "guitar", "fx_type": "eq", "seed": 1})
        assert response.status_code == 200
        body = response.json()
        assert set(body) == {"params", "clamped_fields", "transcript_id"}
        EqParams.from_dict(body["params"]["eq"]).validate()
        assert isinstance(body["clamped_fields"], list)

    def test_reverb_params(self, client):
        body = client.post("/api/generate", json={
            "word": "church", "instrument": "piano", "fx_type": "reverb"}).json()
        ReverbParams.from_dict(body["params"]["reverb"]).validate()

    def test_transcript_retrievable(self, client):
        body = client.post("/api/generate", json={
            "word": "bright", "instrument": "drums", "fx_type": "eq", "seed": 2}).json()
        record = client.get(f"/api/transcripts/{body['transcript_id']}").json()
        assert record["id"] == body["transcript_id"]
        assert record["word"] == "bright"
        assert "prompt_transcript" in record and "raw_text" in record

    def test_same_request_same_transcript_id(self, client):
        payload = {"word": "warm", "instrument": "guitar", "fx_type": "eq", "seed": 7}
        first = client.post("/api/generate", json=payload).json()
        second = client.post("/api/generate", json=payload).json()
        assert first == second

    def test_unknown_transcript_404(self, client):
        response = client.get("/api/transcripts/doesnotexist00")
        assert response.status_code == 404

    def test_missing_field_400(self, client):
        response = client.post("/api/generate", json={"word": "warm"})
        assert response.status_code == 400
        assert response.json()["error"] == "InvalidParams"

    def test_bad_fx_type_400(self, client):
        response = client.post("/api/generate", json={
            "word": "warm", "instrument": "guitar", "fx_type": "flanger"})
        assert response.status_code == 400

    def test_auth_missing_502(self, tmp_path, monkeypatch):
        monkeypatch.delenv("LLM2FX_API_KEY", raising=False)
        config = AppConfig(data_dir=tmp_path)
        config = replace(config, backend=replace(
            config.backend, kind="http_chat",
            endpoint_url="http://127.0.0.1:9/v1/chat/completions", model_name="m"))
        bad = TestClient(build_app(config))
        response = bad.post("/api/generate", json={
            "word": "warm", "instrument": "guitar", "fx_type": "eq"})
        assert response.status_code == 502
        assert response.json()["error"] == "AuthMissing"


class TestRender:
    def test_mix_zero_round_trips_bytes(self, client, dry_wav):
        response = post_render(client, dry_wav, {"reverb": ReverbParams().to_dict()}, seed=5)
        assert response.status_code == 200
        assert response.headers["content-type"] == "audio/wav"
        dry, enc_in = load_wav_bytes(dry_wav)
        wet, enc_out = load_wav_bytes(response.content)
        assert enc_out == enc_in
        assert np.array_equal(dry.data, wet.data)

    def test_eq_metadata(self, client, dry_wav):
        params = {"eq": EqParams(band2_gain_db=4.0).to_dict()}
        response = post_render(client, dry_wav, params)
        assert response.status_code == 200
        meta = json.loads(response.headers["X-Render-Metadata"])
        assert meta["fx_type"] == "eq"
        assert meta["clipped"] in (False, True)
        curve = meta["response_curve"]
        assert len(curve["freq_hz"]) == len(curve["gain_db"]) == 64
        assert max(curve["gain_db"]) > 1.0

    def test_reverb_metadata_has_no_curve(self, client, dry_wav):
        vals = ReverbParams().to_dict()
        vals.update({"band2_gain": 0.5, "band2_decay": 0.8, "mix": 0.4})
        response = post_render(client, dry_wav, {"reverb": vals}, seed=3)
        meta = json.loads(response.headers["X-Render-Metadata"])
        assert meta["fx_type"] == "reverb"
        assert meta["seed"] == 3
        assert "response_curve" not in meta

    def test_graphic_params_render(self, client, dry_wav):
        gains = [0.0] * 40
        gains[20] = 5.0
        response = post_render(client, dry_wav, {"graphic": dict(
            zip(GraphicEqParams.keys(), gains))})
        assert response.status_code == 200
        assert json.loads(response.headers["X-Render-Metadata"])["fx_type"] == "graphic"

    def test_flat_params_accepted(self, client, dry_wav):
        response = post_render(client, dry_wav, EqParams().to_dict())
        assert response.status_code == 200

    def test_malformed_params_400(self, client, dry_wav):
        response = client.post(
            "/api/render",
            files={"file": ("in.wav", io.BytesIO(dry_wav), "audio/wav")},
            data={"params": "not json", "seed": "0"})
        assert response.status_code == 400
        assert response.json()["error"] == "InvalidParams"

    def test_unrecognized_schema_400(self, client, dry_wav):
        response = post_render(client, dry_wav, {"bogus_key": 1.0})
        assert response.status_code == 400
        assert response.json()["error"] == "SchemaMismatch"

    def test_same_seed_same_bytes(self, client, dry_wav):
        vals = ReverbParams().to_dict()
        vals.update({"band4_gain": 0.7, "band4_decay": 1.2, "mix": 0.5})
        first = post_render(client, dry_wav, {"reverb": vals}, seed=9)
        second = post_render(client, dry_wav, {"reverb": vals}, seed=9)
        assert first.content == second.content


class TestFeatures:
    def test_matches_library_serialization(self, client, dry_wav):
        response = client.post(
            "/api/features",
            files={"file": ("in.wav", io.BytesIO(dry_wav), "audio/wav")})
        assert response.status_code == 200
        buf, _ = load_wav_bytes(dry_wav)
        assert response.text == serialize_features(extract_features(buf))


class TestStatelessness:
    def test_request_order_independent(self, client, dry_wav):
        # Interleave endpoints; generate responses depend only on payload.
        payload = {"word": "huge", "instrument": "guitar", "fx_type": "reverb", "seed": 4}
        before = client.post("/api/generate", json=payload).json()
        post_render(client, dry_wav, {"reverb": ReverbParams().to_dict()})
        client.get("/api/fixtures")
        after = client.post("/api/generate", json=payload).json()
        assert before == after
