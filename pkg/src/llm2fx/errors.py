"""Exception types shared across the package.

Every error carries a stable string ``code`` that the CLI and HTTP service
surface verbatim, so callers can match on codes instead of messages.
"""

from __future__ import annotations


class Llm2FxError(Exception):
    """Base class for all package errors."""

    code = "Error"


# fx / audio
class InvalidParams(Llm2FxError):
    code = "InvalidParams"


class SampleRateConflict(Llm2FxError):
    code = "SampleRateConflict"


# features
class SilentSignal(Llm2FxError):
    code = "SilentSignal"


class TooShort(Llm2FxError):
    code = "TooShort"


# textgen
class SchemaMismatch(Llm2FxError):
    code = "SchemaMismatch"


class NoJsonFound(Llm2FxError):
    code = "NoJsonFound"


class MissingKeys(Llm2FxError):
    code = "MissingKeys"

    def __init__(self, keys, fx_type=""):
        self.keys = sorted(keys)
        self.fx_type = fx_type
        super().__init__(f"missing {fx_type} keys: {', '.join(self.keys)}")


class WrongEffect(Llm2FxError):
    code = "WrongEffect"


class BackendUnreachable(Llm2FxError):
    code = "BackendUnreachable"


class AuthMissing(Llm2FxError):
    code = "AuthMissing"


class ParseFailure(Llm2FxError):
    code = "ParseFailure"


# evalkit
class DimensionMismatch(Llm2FxError):
    code = "DimensionMismatch"


class DegenerateKernel(Llm2FxError):
    code = "DegenerateKernel"


class TooFewSets(Llm2FxError):
    code = "TooFewSets"


# dataset
class FileNotFound(Llm2FxError):
    code = "FileNotFound"


class SchemaError(Llm2FxError):
    code = "SchemaError"


class OverlappingRules(Llm2FxError):
    code = "OverlappingRules"


class InsufficientData(Llm2FxError):
    code = "InsufficientData"


class MissingFixture(Llm2FxError):
    code = "MissingFixture"


class MissingCorpus(Llm2FxError):
    code = "MissingCorpus"
