"""Response parser tests: extraction, clamping, wrapping fuzz, totality."""

import numpy as np
import pytest

from llm2fx.errors import MissingKeys, NoJsonFound, WrongEffect
from llm2fx.params import EqParams, ReverbParams, params_to_json, random_params
from llm2fx.textgen import parse_params

REFERENCE_OUTPUT = """{
    "reverb": {
        "band0_gain": 0.0,
        "band1_gain": 0.1,
        "band2_gain": 0.2,
        "band3_gain": 0.3,
        "band4_gain": 0.4,
        "band5_gain": 0.5,
        "band6_gain": 0.6,
        "band7_gain": 0.7,
        "band8_gain": 0.8,
        "band9_gain": 0.9,
        "band10_gain": 1.0,
        "band11_gain": 0.9,
        "band0_decay": 3.0,
        "band1_decay": 2.5,
        "band2_decay": 2.0,
        "band3_decay": 1.5,
        "band4_decay": 1.2,
        "band5_decay": 1.0,
        "band6_decay": 0.8,
        "band7_decay": 0.6,
        "band8_decay": 0.4,
        "band9_decay": 0.3,
        "band10_decay": 0.2,
        "band11_decay": 0.1,
        "mix": 0.7
    }
}"""

# Prose framings a chat model might wrap an answer in.
WRAP_TEMPLATES = [
    "{json}",
    "```json\n{json}\n```",
    "```\n{json}\n```",
    "Sure! Here are the settings: {json} hope this helps",
    "Here is the JSON:\n\n{json}",
    "{json}\n\nLet me know if you need adjustments!",
    "The parameters below should work well.\n```json\n{json}\n```\nEnjoy!",
    "ANSWER: {json}",
    "I suggest the following configuration:\n{json}\nThese values suit the style.",
    "Of course. Based on the requested character:\n\n```json\n{json}\n```",
    "json\n{json}",
    "Response:\n\t{json}",
    "  {json}  ",
    "As an expert audio engineer, I recommend: {json}.",
    "{json} -- tuned for the requested instrument.",
    "Note: values are floats.\n{json}\nAll keys included.",
    "```JSON\n{json}\n```",
    "Final answer follows.\n\n\n{json}",
    "> {json}",
    "Parameters ('best effort'): {json}",
]


class TestReferenceOutput:
    def test_reference_reverb_object(self):
        params, clamped = parse_params(REFERENCE_OUTPUT, "reverb")
        assert isinstance(params, ReverbParams)
        assert params.band_gains[0] == 0.0
        assert params.band_gains[10] == 1.0
        assert params.band_decays[11] == 0.1
        assert params.mix == 0.7
        assert clamped == []

    def test_flat_object_accepted(self):
        flat = params_to_json(EqParams())
        inner = flat.split("\n", 1)[1].rsplit("\n", 1)[0]  # strip outer braces
        inner = "{" + inner.split("{", 1)[1].rsplit("}", 1)[0] + "}"
        params, clamped = parse_params(inner, "eq")
        assert params == EqParams()
        assert clamped == []


class TestWrappingFuzz:
    @pytest.mark.parametrize("template", WRAP_TEMPLATES)
    def test_wrapped_equals_bare(self, template):
        rng = np.random.default_rng(hash(template) % 2**32)
        for fx in ("eq", "reverb"):
            params = random_params(fx, rng)
            bare, _ = parse_params(params_to_json(params), fx)
            wrapped, _ = parse_params(template.format(json=params_to_json(params)), fx)
            assert wrapped == bare == params

    def test_single_quoted_dict(self):
        p = ReverbParams(band_gains=(0.5,) * 12, band_decays=(1.0,) * 12, mix=0.3)
        text = "ANSWER: " + repr({"reverb": p.to_dict()})
        params, _ = parse_params(text, "reverb")
        assert params == p

    def test_first_object_wins(self):
        a = ReverbParams(mix=0.1)
        b = ReverbParams(mix=0.9)
        text = params_to_json(a) + "\n" + params_to_json(b)
        params, _ = parse_params(text, "reverb")
        assert params.mix == 0.1

    def test_unparseable_braces_before_object(self):
        text = "{not json at all} " + params_to_json(EqParams())
        params, _ = parse_params(text, "eq")
        assert params == EqParams()


class TestClamping:
    def test_mix_clamped(self):
        text = REFERENCE_OUTPUT.replace('"mix": 0.7', '"mix": 1.7')
        params, clamped = parse_params(text, "reverb")
        assert params.mix == 1.0
        assert clamped == ["mix"]

    def test_clamp_idempotent(self):
        text = REFERENCE_OUTPUT.replace('"band0_decay": 3.0', '"band0_decay": 99.0')
        once, moved = parse_params(text, "reverb")
        again, moved_again = parse_params(params_to_json(once), "reverb")
        assert once == again
        assert moved == ["band0_decay"]
        assert moved_again == []


class TestErrors:
    def test_no_json(self):
        with pytest.raises(NoJsonFound):
            parse_params("there is no object here", "reverb")

    def test_missing_keys_listed(self):
        with pytest.raises(MissingKeys, match="band11_decay"):
            parse_params('{"reverb": {"band0_gain": 0.5}}', "reverb")

    def test_wrong_effect_nested(self):
        with pytest.raises(WrongEffect):
            parse_params(REFERENCE_OUTPUT, "eq")

    def test_wrong_effect_flat(self):
        flat = {k: 0.5 for k in ReverbParams.keys()}
        with pytest.raises(WrongEffect):
            parse_params(str(flat), "eq")

    def test_extra_keys_ignored(self):
        text = REFERENCE_OUTPUT.replace('"mix": 0.7', '"mix": 0.7, "comment": "nice"')
        params, _ = parse_params(text, "reverb")
        assert params.mix == 0.7


class TestTotality:
    def test_round_trip_every_param_set(self):
        rng = np.random.default_rng(99)
        for fx in ("eq", "reverb"):
            for _ in range(25):
                p = random_params(fx, rng)
                parsed, clamped = parse_params(params_to_json(p), fx)
                assert parsed == p
                assert clamped == []

    def test_random_bytes_never_panic(self):
        rng = np.random.default_rng(7)
        for _ in range(2000):
            size = int(rng.integers(1, 80))
            blob = bytes(rng.integers(0, 256, size=size, dtype=np.uint8))
            text = blob.decode("utf-8", errors="replace")
            try:
                parse_params(text, "reverb")
            except (NoJsonFound, MissingKeys, WrongEffect):
                pass

    def test_adversarial_shapes(self):
        for text in ("{}", "[]", "{{{{", "}}}}", '{"a"', "{'reverb': []}",
                     '{"reverb": 3}', '{"reverb": {"mix": "x"}}', "{" * 500,
                     '{"eq": {}}' * 3, "\x00{\x00}"):
            try:
                parse_params(text, "eq")
            except (NoJsonFound, MissingKeys, WrongEffect):
                pass
