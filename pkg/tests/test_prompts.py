"""Prompt assembly tests, pinned to a golden transcript."""

from pathlib import Path

import pytest

from llm2fx.errors import InvalidParams, SchemaMismatch
from llm2fx.features import DspFeatures
from llm2fx.params import EqParams, ReverbParams
from llm2fx.textgen import (
    ContextConfig,
    FewShotExample,
    assemble_transcript,
    build_context,
    build_system_prompt,
    build_user_message,
    build_user_query,
    load_fewshot,
)

GOLDEN = Path(__file__).parent / "data" / "golden_transcript_reverb.txt"

REFERENCE_FEATURES = DspFeatures(44100, 0.04, 11.86, 0.06, 1476.24, 0.01, 1796.65, 2.94)

FEATURE_SECTION = """# Input audio feature

{
    "sample_rate": 44100,
    "rms_energy": 0.04,
    "crest_factor": 11.86,
    "dynamic_spread": 0.06,
    "spectral_centroid": 1476.24,
    "spectral_flatness": 0.01,
    "spectral_bandwidth": 1796.65,
    "estimated_rt60": 2.94
}"""


class TestSystemPrompt:
    def test_reverb_contains_role_and_schema(self):
        text = build_system_prompt("reverb", "guitar")
        assert text.startswith("You are an expert audio engineer and music producer")
        assert "You MUST respond with ONLY a valid JSON object." in text
        for key in ReverbParams.keys():
            assert f'"{key}": float' in text

    def test_eq_has_eq_schema_only(self):
        text = build_system_prompt("eq", "drums")
        for key in EqParams.keys():
            assert f'"{key}": float' in text
        assert "band0_gain" not in text
        assert '"mix"' not in text

    def test_deterministic(self):
        assert build_system_prompt("reverb", "piano") == build_system_prompt("reverb", "piano")

    def test_sample_rate_substitution(self):
        assert "For 22050 sample rate audio" in build_system_prompt("eq", "piano", sample_rate=22050)


class TestUserQuery:
    def test_reverb_phrasing(self):
        assert (build_user_query("church", "guitar", "reverb")
                == "please design a reverb audio effects for a church guitar sound.")

    def test_eq_phrasing(self):
        assert (build_user_query("warm", "piano", "eq")
                == "Please design a eq audio effect for a warm piano sound.")

    def test_empty_word_rejected(self):
        with pytest.raises(InvalidParams):
            build_user_query("", "guitar", "reverb")


class TestContext:
    def test_all_off_is_zero_shot(self):
        assert build_context(ContextConfig(), "reverb") == ""

    def test_feature_section_bytes(self):
        cfg = ContextConfig(include_features=True, features=REFERENCE_FEATURES)
        assert build_context(cfg, "reverb") == FEATURE_SECTION

    def test_fewshot_blocks_and_open_cue(self):
        cfg = ContextConfig(fewshot=load_fewshot("reverb"))
        query = build_user_query("church", "guitar", "reverb")
        text = build_context(cfg, "reverb", query=query)
        assert text.count("QUESTION:") == 6
        assert text.count("ANSWER:") == 6
        assert text.endswith("QUESTION: please design a reverb audio effects "
                             "for a church guitar sound.\nANSWER: ")

    def test_mismatched_fewshot_rejected(self):
        eq_example = FewShotExample("warm", "piano", "eq", EqParams())
        with pytest.raises(SchemaMismatch):
            build_context(ContextConfig(fewshot=(eq_example,)), "reverb")

    def test_missing_features_rejected(self):
        with pytest.raises(InvalidParams):
            build_context(ContextConfig(include_features=True), "reverb")

    def test_zero_shot_user_message_has_no_sections(self):
        msg = build_user_message(ContextConfig(), "eq", "warm", "piano")
        assert msg == "Please design a eq audio effect for a warm piano sound."
        assert "#" not in msg

    def test_code_section_header(self):
        text = build_context(ContextConfig(include_code=True), "reverb")
        assert text.startswith("# Signal processing function\n\nimport numpy as np")
        assert "def noise_shaped_reverberation(" in text
        eq_text = build_context(ContextConfig(include_code=True), "eq")
        assert "def parametric_equalizer(" in eq_text


class TestGoldenTranscript:
    def test_full_transcript_byte_identical(self):
        cfg = ContextConfig(
            include_features=True,
            features=REFERENCE_FEATURES,
            include_code=True,
            fewshot=load_fewshot("reverb"),
        )
        built = assemble_transcript(cfg, "reverb", "church", "guitar")
        assert built + "\n" == GOLDEN.read_text()

    def test_fewshot_answers_render_single_quoted(self):
        cfg = ContextConfig(fewshot=load_fewshot("reverb", k=1))
        text = build_context(cfg, "reverb")
        assert "ANSWER: {'reverb': {'band0_gain': 0.0," in text
