"""Experiment metrics: ROC/AUC, F1 at a fixed significance level, fidelity
scores, and the watermark-strength length sweep.

``meteor_lite`` is an exact-match variant of METEOR (no stemming or synonym
stage): greedy unigram alignment, harmonic Fmean weighted toward recall, and
the cubic fragmentation penalty. Label it as a variant wherever reported.
"""

from __future__ import annotations

import bisect
import csv
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import WatermarkConfig
from .detect import DetectionReport, detect_fast, detect_precise
from .inject import inject
from .providers import Lexicon, cosine
from .textmodel import Document

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RocPoint:
    threshold: float
    tpr: float
    fpr: float


@dataclass(frozen=True)
class FidelityScores:
    meteor_lite: float
    vec_similarity: float


def roc_auc(pos_scores: Sequence[float],
            neg_scores: Sequence[float]) -> tuple[list[RocPoint], float]:
    """Sweep thresholds over the score union; AUC by the rank statistic.

    A sample is flagged positive when its score is >= the threshold, so the
    curve runs from (1, 1) down to (0, 0) as the threshold rises. Ties
    between positive and negative scores contribute half a win to the AUC.
    """
    if not pos_scores or not neg_scores:
        raise ValueError("both score lists must be nonempty")
    pos = sorted(pos_scores)
    neg = sorted(neg_scores)
    thresholds = [-math.inf] + sorted(set(pos) | set(neg)) + [math.inf]
    curve = []
    for t in thresholds:
        tpr = (len(pos) - bisect.bisect_left(pos, t)) / len(pos)
        fpr = (len(neg) - bisect.bisect_left(neg, t)) / len(neg)
        curve.append(RocPoint(threshold=t, tpr=tpr, fpr=fpr))
    wins = 0.0
    for s in pos:
        below = bisect.bisect_left(neg, s)
        ties = bisect.bisect_right(neg, s) - below
        wins += below + 0.5 * ties
    return curve, wins / (len(pos) * len(neg))


def f1_at_alpha(reports_pos: Sequence[DetectionReport],
                reports_neg: Sequence[DetectionReport], alpha: float) -> float:
    """F1 of the watermarked=true decision, positives first."""
    for r in list(reports_pos) + list(reports_neg):
        if not math.isclose(r.alpha, alpha):
            raise ValueError(f"report computed at alpha={r.alpha}, expected {alpha}")
    tp = sum(1 for r in reports_pos if r.watermarked)
    fp = sum(1 for r in reports_neg if r.watermarked)
    fn = len(reports_pos) - tp
    if tp == 0:
        if fp == 0 and fn == 0:
            warnings.warn("no predicted and no actual positives; defining F1 = 0")
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)


def _align(reference: list[str], candidate: list[str]) -> list[tuple[int, int]]:
    """Greedy left-to-right exact-match alignment: (cand_pos, ref_pos) pairs."""
    used = [False] * len(reference)
    pairs = []
    for j, word in enumerate(candidate):
        for k, ref_word in enumerate(reference):
            if not used[k] and ref_word == word:
                used[k] = True
                pairs.append((j, k))
                break
    return pairs


def meteor_lite(reference: Document, candidate: Document) -> float:
    """Exact-match unigram METEOR variant with fragmentation penalty."""
    ref = reference.surfaces()
    cand = candidate.surfaces()
    pairs = _align(ref, cand)
    m = len(pairs)
    if m == 0:
        return 0.0
    precision = m / len(cand)
    recall = m / len(ref)
    fmean = 10 * precision * recall / (recall + 9 * precision)
    chunks = 1
    for (j0, k0), (j1, k1) in zip(pairs, pairs[1:]):
        if j1 != j0 + 1 or k1 != k0 + 1:
            chunks += 1
    penalty = 0.5 * (chunks / m) ** 3
    return fmean * (1.0 - penalty)


def doc_vector_similarity(reference: Document, candidate: Document,
                          lexicon: Lexicon) -> float:
    """Cosine between mean-of-vectors embeddings of two documents."""
    def embed(doc: Document):
        vecs = [v for t in doc.tokens if (v := lexicon.vector(t.surface)) is not None]
        return np.mean(vecs, axis=0) if vecs else None

    a = embed(reference)
    b = embed(candidate)
    if a is None or b is None:
        return 0.0
    return cosine(a, b)


def fidelity_scores(reference: Document, candidate: Document,
                    lexicon: Lexicon) -> FidelityScores:
    return FidelityScores(
        meteor_lite=meteor_lite(reference, candidate),
        vec_similarity=doc_vector_similarity(reference, candidate, lexicon),
    )


def length_sweep(corpus_by_length: dict[int, Sequence[Document]],
                 cfg: WatermarkConfig) -> list[tuple[int, float, float]]:
    """Inject and detect per length bucket; emit mean Z for both modes."""
    if len(corpus_by_length) < 2:
        raise ValueError("length sweep needs at least two buckets")
    rows = []
    for length in sorted(corpus_by_length):
        docs = corpus_by_length[length]
        if not docs:
            log.warning("skipping empty length bucket %d", length)
            continue
        fast_z = []
        precise_z = []
        for doc in docs:
            marked = inject(doc, cfg).doc_out
            fast_z.append(detect_fast(marked, cfg).z)
            precise_z.append(detect_precise(marked, cfg).z)
        rows.append((length, float(np.mean(fast_z)), float(np.mean(precise_z))))
    return rows


def write_results(path, rows: Iterable[tuple[str, str, str, float]]) -> None:
    """Write (experiment, parameter, metric, value) rows as CSV."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["experiment", "parameter", "metric", "value"])
        for row in rows:
            writer.writerow(row)


def write_curve(path, curve: Sequence[RocPoint]) -> None:
    """Export ROC curve points as plot-ready CSV."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "tpr", "fpr"])
        for point in curve:
            writer.writerow([point.threshold, point.tpr, point.fpr])
