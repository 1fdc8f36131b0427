"""Descriptor merging: collapse near-synonyms onto one representative.

Rules ship as a reviewed text table, one rule per line:

    member, member, ... -> representative

The representative must be one of the members; "#" starts a comment.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from ..errors import InvalidParams, OverlappingRules
from ..params import FX_TYPES
from .socialfx import RawExample, vocabulary

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MergeRule:
    members: frozenset[str]
    representative: str

    def __post_init__(self):
        if self.representative not in self.members:
            raise InvalidParams(
                f"representative {self.representative!r} not among members")


def parse_merge_rules(text: str) -> list[MergeRule]:
    rules: list[MergeRule] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise InvalidParams(f"rules line {lineno}: missing '->'")
        left, right = line.rsplit("->", 1)
        members = frozenset(m.strip().lower() for m in left.split(",") if m.strip())
        rules.append(MergeRule(members, right.strip().lower()))
    _check_disjoint(rules)
    return rules


def load_merge_rules(path: str | Path) -> list[MergeRule]:
    return parse_merge_rules(Path(path).read_text())


def _check_disjoint(rules: list[MergeRule]) -> None:
    seen: dict[str, str] = {}
    for rule in rules:
        for member in rule.members:
            if member in seen:
                raise OverlappingRules(
                    f"word {member!r} appears under both {seen[member]!r} "
                    f"and {rule.representative!r}")
            seen[member] = rule.representative


def apply_merge_rules(examples: list[RawExample],
                      rules: list[MergeRule]) -> list[RawExample]:
    """Replace each descriptor by its rule representative; unmatched
    descriptors pass through. Duplicates created by a merge collapse."""
    _check_disjoint(rules)
    table = {m: r.representative for r in rules for m in r.members}
    out: list[RawExample] = []
    for example in examples:
        merged = tuple(dict.fromkeys(table.get(t, t) for t in example.descriptor_terms))
        out.append(RawExample(merged, example.fx_type,
                              example.params_native, example.source_id))
    for fx_type in FX_TYPES:
        before = len(vocabulary(examples, fx_type))
        after = len(vocabulary(out, fx_type))
        if before:
            log.info("merge: %s vocabulary %d -> %d", fx_type, before, after)
    return out
