"""Vocabulary filters: term frequency, then a linear-probe sanity check.

The probe renders every example onto dry fixtures, embeds the wet
features, and trains a multinomial logistic classifier with 5-fold
cross-validation. Words whose F1 does not beat the same classifier
trained on unit-Gaussian random vectors carry no usable signal and are
dropped.
"""

from __future__ import annotations

import logging
from collections import Counter
from typing import Mapping, Sequence

import numpy as np
from sklearn.linear_model import LogisticRegression
from sklearn.metrics import f1_score
from sklearn.model_selection import StratifiedKFold, cross_val_predict

from ..audio import AudioBuffer
from ..errors import InsufficientData
from ..evalkit import compute_stats, embed
from ..evalkit.render import FeatureCache
from ..params import FX_EQ, FX_REVERB
from .fixtures import make_fixture
from .socialfx import RawExample, vocabulary

log = logging.getLogger(__name__)

TF_THRESHOLDS = {FX_EQ: 20, FX_REVERB: 100}
PROBE_FOLDS = 5


def word_counts(examples: Sequence[RawExample], fx_type: str) -> Counter:
    counts: Counter = Counter()
    for example in examples:
        if example.fx_type == fx_type:
            counts.update(example.descriptor_terms)
    return counts


def _drop_words(examples: Sequence[RawExample], fx_type: str,
                dropped: set[str]) -> list[RawExample]:
    """Remove the given descriptors from one effect type's examples;
    examples left with no descriptors disappear."""
    out: list[RawExample] = []
    for example in examples:
        if example.fx_type != fx_type:
            out.append(example)
            continue
        kept = tuple(t for t in example.descriptor_terms if t not in dropped)
        if kept:
            out.append(RawExample(kept, example.fx_type,
                                  example.params_native, example.source_id))
    return out


def tf_filter(examples: Sequence[RawExample], fx_type: str,
              threshold: int | None = None) -> list[RawExample]:
    """Drop words with fewer occurrences than the effect's threshold."""
    if threshold is None:
        threshold = TF_THRESHOLDS[fx_type]
    counts = word_counts(examples, fx_type)
    dropped = {w for w, c in counts.items() if c < threshold}
    out = _drop_words(examples, fx_type, dropped)
    log.info("tf_filter: %s keeps %s", fx_type, vocabulary(out, fx_type))
    return out


def _probe_f1(x: np.ndarray, labels: np.ndarray, words: list[str],
              seed: int) -> np.ndarray:
    folds = StratifiedKFold(n_splits=PROBE_FOLDS, shuffle=True, random_state=seed)
    clf = LogisticRegression(max_iter=1000)
    predicted = cross_val_predict(clf, x, labels, cv=folds)
    return f1_score(labels, predicted, labels=np.arange(len(words)),
                    average=None, zero_division=0.0)


def probe_filter(examples: Sequence[RawExample], fx_type: str, seed: int = 0,
                 fixtures: Mapping[str, AudioBuffer] | None = None) -> list[RawExample]:
    """Drop words whose linear-probe F1 fails to beat a random baseline.

    Each (example, descriptor) pair is one training row; its vector is
    the standardized wet-render embedding, concatenated across fixtures.

    Raises:
        InsufficientData: some word has fewer rows than the fold count.
    """
    if fixtures is None:
        fixtures = {"guitar": make_fixture("guitar", 22050)}
    rows = [e for e in examples if e.fx_type == fx_type]
    words = vocabulary(rows, fx_type)
    if not words:
        return list(examples)
    counts = word_counts(rows, fx_type)
    thin = [w for w in words if counts[w] < PROBE_FOLDS]
    if thin:
        raise InsufficientData(
            f"words {thin} have fewer than {PROBE_FOLDS} examples; "
            f"cannot fill every cross-validation fold")

    caches = {name: FeatureCache(buf) for name, buf in sorted(fixtures.items())}
    per_fixture = {
        name: [cache.features_of(e.native_params()) for e in rows]
        for name, cache in caches.items()
    }
    blocks = []
    for name in sorted(per_fixture):
        feats = per_fixture[name]
        stats = compute_stats(feats)
        blocks.append(np.array([embed(f, stats).vector for f in feats]))
    matrix = np.hstack(blocks)

    index = {w: i for i, w in enumerate(words)}
    x_rows, labels = [], []
    for row, vec in zip(rows, matrix):
        for term in row.descriptor_terms:
            x_rows.append(vec)
            labels.append(index[term])
    x = np.array(x_rows)
    y = np.array(labels)

    f1 = _probe_f1(x, y, words, seed)
    rng = np.random.default_rng(seed)
    baseline = _probe_f1(rng.standard_normal(x.shape), y, words, seed)

    dropped = {w for i, w in enumerate(words) if f1[i] <= baseline[i]}
    for word in sorted(dropped):
        log.info("probe_filter: dropping %r (f1 %.3f <= baseline %.3f)",
                 word, f1[index[word]], baseline[index[word]])
    return _drop_words(examples, fx_type, dropped)
