"""Prompt construction: system prompt, in-context sections, user query.

Section joining uses exactly one blank line everywhere; few-shot answers
render as single-quoted dict literals nested under the effect key. These
byte-level choices are pinned by golden-transcript tests, so change them
only together with those fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from ..errors import InvalidParams, SchemaMismatch
from ..features import DspFeatures, serialize_features
from ..params import ParamSet, fx_type_of, param_class
from ..params import FX_EQ, FX_REVERB, FX_TYPES

MAX_FEWSHOT = 16

ROLE = (
    "You are an expert audio engineer and music producer specializing in sound "
    "design and audio processing. Your task is to translate descriptive timbre "
    "words into specific audio effects parameters that will achieve the desired "
    "sound character. You have deep knowledge of equalizers and understand how "
    "they shape timbre. You MUST respond with ONLY a valid JSON object."
)

INSTRUCTION = {
    FX_REVERB: (
        "# Instruction Format\n"
        "Given a reverb description word or phrase and an instrument type, "
        "generate appropriate parameters for a frequency-dependent reverb that "
        "will achieve the requested spatial character.\n"
        "For {sample_rate} sample rate audio, Consider the typical reverb needs "
        "of the specified instrument when designing the reverb characteristics."
    ),
    FX_EQ: (
        "# Instruction Format\n"
        "Given an equalizer description word or phrase and an instrument type, "
        "generate appropriate parameters for a six-band parametric equalizer "
        "that will achieve the requested timbre character.\n"
        "For {sample_rate} sample rate audio, Consider the typical equalization "
        "needs of the specified instrument when shaping the frequency response."
    ),
}

INPUT_FORMAT = {
    FX_REVERB: (
        "# Input Format\n"
        "The input will consist of:\n"
        "1. A reverb description such as:\n"
        '   - Single words: "hall", "room", "plate", "cathedral", "chamber", "spring", "ambient"\n'
        '   - Combined descriptions: "warm hall", "bright room", "dark chamber", "short but dense"\n'
        '   - Spatial descriptions: "distant", "close", "intimate", "huge", "airy", "tight"\n'
        "2. An instrument type such as:\n"
        '   - "drums", "guitar", "piano", "vocals", "strings", "brass"'
    ),
    FX_EQ: (
        "# Input Format\n"
        "The input will consist of:\n"
        "1. An equalizer description such as:\n"
        '   - Single words: "warm", "bright", "soft", "harsh", "calm", "loud", "heavy"\n'
        '   - Combined descriptions: "warm but clear", "bright and airy", "dark and heavy"\n'
        "2. An instrument type such as:\n"
        '   - "drums", "guitar", "piano", "vocals", "strings", "brass"'
    ),
}

OUTPUT_INTRO = {
    FX_REVERB: (
        "# Output Format\n"
        "Respond with a JSON object containing precise numerical parameters for "
        "the reverb. All values should be in float format for efficiency. The "
        "output will include:\n"
        "- The reverb parameters optimized for the requested spatial character "
        "and instrument. All values should be floating point numbers with 2 "
        "decimal places of precision.\n"
        "Format:"
    ),
    FX_EQ: (
        "# Output Format\n"
        "Respond with a JSON object containing precise numerical parameters for "
        "the equalizer. All values should be in float format for efficiency. The "
        "output will include:\n"
        "- The equalizer parameters optimized for the requested timbre character "
        "and instrument. All values should be floating point numbers with 2 "
        "decimal places of precision.\n"
        "Format:"
    ),
}

QUERY_TEMPLATE = {
    # The reverb phrasing is intentionally lowercase with a plural
    # "effects"; few-shot QUESTION lines reuse it, so it must not drift.
    FX_REVERB: "please design a reverb audio effects for a {word} {instrument} sound.",
    FX_EQ: "Please design a eq audio effect for a {word} {instrument} sound.",
}


@dataclass(frozen=True)
class FewShotExample:
    """One worked (description, parameters) pair for the prompt."""

    timbre_word: str
    instrument: str
    fx_type: str
    params: ParamSet


@dataclass(frozen=True)
class ContextConfig:
    """Which in-context sections to include, and their payloads."""

    include_features: bool = False
    features: DspFeatures | None = None
    include_code: bool = False
    fewshot: tuple[FewShotExample, ...] = ()

    def validate(self) -> None:
        if self.include_features and self.features is None:
            raise InvalidParams("include_features set but no features given")
        if len(self.fewshot) > MAX_FEWSHOT:
            raise InvalidParams(f"at most {MAX_FEWSHOT} few-shot examples, got {len(self.fewshot)}")


def _check_fx_type(fx_type: str) -> None:
    if fx_type not in FX_TYPES:
        raise InvalidParams(f"unknown fx_type {fx_type!r}")


def schema_block(fx_type: str) -> str:
    """The nested JSON skeleton listing every parameter key as `float`."""
    keys = param_class(fx_type).keys()
    lines = [f'        "{k}": float,' for k in keys]
    lines[-1] = lines[-1].rstrip(",")
    body = "\n".join(lines)
    return "{\n" + f'    "{fx_type}": {{\n{body}\n    }}\n' + "}"


def build_system_prompt(fx_type: str, instrument: str, sample_rate: int = 44100) -> str:
    """Role definition, task instruction, and response-format mandate.

    The text addresses "the specified instrument" generically; the
    instrument argument is part of the call signature for symmetry with
    the query builder but does not alter the text.
    """
    _check_fx_type(fx_type)
    del instrument
    instruction = INSTRUCTION[fx_type].format(sample_rate=sample_rate)
    output = OUTPUT_INTRO[fx_type] + "\n" + schema_block(fx_type)
    return "\n\n".join([ROLE, instruction, INPUT_FORMAT[fx_type], output])


def build_user_query(timbre_word: str, instrument: str, fx_type: str) -> str:
    """The single-sentence request d."""
    _check_fx_type(fx_type)
    if not timbre_word:
        raise InvalidParams("timbre_word must be nonempty")
    if not instrument:
        raise InvalidParams("instrument must be nonempty")
    return QUERY_TEMPLATE[fx_type].format(word=timbre_word, instrument=instrument)


def render_example(example: FewShotExample) -> str:
    query = build_user_query(example.timbre_word, example.instrument, example.fx_type)
    answer = repr({example.fx_type: example.params.to_dict()})
    return f"QUESTION: {query}\nANSWER: {answer}"


def code_asset(fx_type: str) -> str:
    _check_fx_type(fx_type)
    name = f"{fx_type}_code.txt"
    text = resources.files("llm2fx.textgen.assets").joinpath(name).read_text()
    return text.rstrip("\n")


def build_context(cfg: ContextConfig, fx_type: str, query: str | None = None) -> str:
    """Concatenate the enabled context sections: function source, audio
    features, worked examples. With few-shot examples present, a query
    becomes the trailing open "QUESTION: ...\\nANSWER: " cue the model
    completes; empty config yields the empty string (zero-shot).
    """
    _check_fx_type(fx_type)
    cfg.validate()
    for ex in cfg.fewshot:
        if ex.fx_type != fx_type:
            raise SchemaMismatch(
                f"few-shot example for {ex.fx_type!r} cannot prompt a {fx_type!r} request")
        if fx_type_of(ex.params) != fx_type:
            raise SchemaMismatch("few-shot params do not match the requested effect")

    sections: list[str] = []
    if cfg.include_code:
        sections.append("# Signal processing function\n\n" + code_asset(fx_type))
    if cfg.include_features:
        sections.append("# Input audio feature\n\n" + serialize_features(cfg.features))
    if cfg.fewshot:
        blocks = [render_example(ex) for ex in cfg.fewshot]
        if query is not None:
            blocks.append(f"QUESTION: {query}\nANSWER: ")
        sections.append("# Incontext examples\n\n" + "\n\n".join(blocks))
    return "\n\n".join(sections)


def build_user_message(cfg: ContextConfig, fx_type: str, timbre_word: str, instrument: str) -> str:
    """Context plus query, as sent in the user role. The query rides
    inside the few-shot cue when examples are present, otherwise it
    follows the sections as a bare sentence."""
    query = build_user_query(timbre_word, instrument, fx_type)
    if cfg.fewshot:
        return build_context(cfg, fx_type, query=query)
    context = build_context(cfg, fx_type)
    return f"{context}\n\n{query}" if context else query


def assemble_transcript(cfg: ContextConfig, fx_type: str, timbre_word: str, instrument: str,
                        sample_rate: int = 44100) -> str:
    """Full prompt as one document: system prompt, blank line, user
    message. This is the exact text persisted for audit."""
    system = build_system_prompt(fx_type, instrument, sample_rate=sample_rate)
    user = build_user_message(cfg, fx_type, timbre_word, instrument)
    return f"{system}\n\n{user}"
