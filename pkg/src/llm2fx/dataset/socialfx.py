"""Crowdsourced descriptor corpus ingestion.

Column layout (one row per contribution, documented in the README):

  eq.csv      source_id, descriptors, gain0_db .. gain39_db
  reverb.csv  source_id, descriptors, band0_gain .. band11_gain,
              band0_decay .. band11_decay, mix

EQ rows carry exactly one descriptor; reverb rows may carry several,
separated by ";". Malformed rows are skipped and counted, never fatal.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

from ..errors import FileNotFound, InvalidParams, SchemaError
from ..params import FX_EQ, FX_REVERB, GraphicEqParams, ReverbParams

log = logging.getLogger(__name__)

_EQ_COLUMNS = ["source_id", "descriptors"] + GraphicEqParams.keys()
_REVERB_COLUMNS = ["source_id", "descriptors"] + ReverbParams.keys()
_FILES = {FX_EQ: ("eq.csv", _EQ_COLUMNS), FX_REVERB: ("reverb.csv", _REVERB_COLUMNS)}


@dataclass(frozen=True)
class RawExample:
    """One contribution: descriptor words plus the native parameter vector
    (40 graphic-EQ gains in dB, or the 25 reverb fields in key order)."""

    descriptor_terms: tuple[str, ...]
    fx_type: str
    params_native: tuple[float, ...]
    source_id: str

    def native_params(self):
        if self.fx_type == FX_EQ:
            return GraphicEqParams(gains_db=self.params_native)
        vec = self.params_native
        return ReverbParams(band_gains=vec[:12], band_decays=vec[12:24], mix=vec[24])


def _parse_descriptors(cell: str, fx_type: str) -> tuple[str, ...]:
    terms = tuple(dict.fromkeys(t.strip().lower() for t in cell.split(";") if t.strip()))
    if not terms:
        raise ValueError("no descriptors")
    if fx_type == FX_EQ and len(terms) != 1:
        raise ValueError("eq rows carry exactly one descriptor")
    return terms


def _load_file(path: Path, fx_type: str, columns: list[str]) -> list[RawExample]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            log.warning("%s is empty", path)
            return []
        if header != columns:
            raise SchemaError(
                f"{path.name}: expected columns {columns[:3]}..., got {header[:3]}...")
        rows: list[RawExample] = []
        skipped = 0
        for line in reader:
            try:
                if len(line) != len(columns):
                    raise ValueError("wrong column count")
                terms = _parse_descriptors(line[1], fx_type)
                values = tuple(float(v) for v in line[2:])
                example = RawExample(terms, fx_type, values, line[0])
                example.native_params().validate()
                rows.append(example)
            except (ValueError, InvalidParams) as exc:
                skipped += 1
                log.debug("skipping row in %s: %s", path.name, exc)
        if skipped:
            log.warning("%s: skipped %d malformed rows", path.name, skipped)
        if not rows:
            log.warning("%s contains no usable rows", path.name)
        return rows


def load_socialfx(path: str | Path) -> list[RawExample]:
    """Load every recognized CSV under a corpus directory.

    Raises:
        FileNotFound: directory missing, or neither eq.csv nor reverb.csv
            present.
        SchemaError: a present file has the wrong column layout.
    """
    directory = Path(path)
    if not directory.is_dir():
        raise FileNotFound(f"corpus directory {directory} does not exist")
    examples: list[RawExample] = []
    found = False
    for fx_type, (filename, columns) in _FILES.items():
        file_path = directory / filename
        if not file_path.exists():
            continue
        found = True
        examples.extend(_load_file(file_path, fx_type, columns))
    if not found:
        raise FileNotFound(f"no eq.csv or reverb.csv under {directory}")
    return examples


def vocabulary(examples: list[RawExample], fx_type: str) -> list[str]:
    """Sorted distinct descriptor words for one effect type."""
    words = {t for e in examples if e.fx_type == fx_type for t in e.descriptor_terms}
    return sorted(words)


def count_sets(examples: list[RawExample], fx_type: str) -> int:
    """Parameter sets contributed to an effect type; a row with several
    descriptors contributes one set per descriptor."""
    return sum(len(e.descriptor_terms) for e in examples if e.fx_type == fx_type)
