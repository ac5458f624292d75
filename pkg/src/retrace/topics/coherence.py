"""UMass topic coherence and plateau-based selection of the topic count."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import SelectionError, ValidationError
from .corpus import Corpus
from .lda import LdaModel, top_terms, train_lda
from .tfidf import vectorize_tfidf

logger = logging.getLogger(__name__)

DEFAULT_PLATEAU_EPSILON = 0.005
DEFAULT_PLATEAU_WINDOW = 2
DEFAULT_RUNS_PER_K = 3


@dataclass
class CoherenceCurve:
    points: list[tuple[int, float]]  # (K, mean coherence)
    measure: str = "umass"

    def __post_init__(self):
        ks = [k for k, _ in self.points]
        if ks != sorted(set(ks)):
            raise ValidationError("curve K values must be strictly increasing")


def cooccurrence_counts(corpus: Corpus) -> tuple[dict[int, int], dict[tuple[int, int], int]]:
    """Document-frequency and pairwise document co-occurrence counts."""
    single: dict[int, int] = dict(corpus.dictionary.doc_freq)
    pair: dict[tuple[int, int], int] = {}
    for ids in corpus.token_ids():
        uniq = sorted(set(ids))
        for i, a in enumerate(uniq):
            for b in uniq[i + 1:]:
                pair[(a, b)] = pair.get((a, b), 0) + 1
    return single, pair


def topic_coherence(model: LdaModel, corpus: Corpus, top_n: int = 10) -> tuple[list[float], float]:
    """UMass coherence per topic plus the mean over topics.

    For a topic's top words v_1..v_N (ranked by probability), the score is
    sum over pairs l < m of ln((D(v_m, v_l) + 1) / D(v_l)), with D taken from
    the training corpus. Natural log.
    """
    if top_n > len(corpus.dictionary):
        raise ValidationError("top_n exceeds vocabulary size")
    single, pair = cooccurrence_counts(corpus)
    scores = []
    for topic in range(model.K):
        words = top_terms(model, topic, top_n)
        score = 0.0
        for m in range(1, len(words)):
            for l in range(m):
                w_m, w_l = words[m], words[l]
                co = pair.get((min(w_m, w_l), max(w_m, w_l)), 0)
                denom = single.get(w_l, 0)
                if denom == 0:
                    # top words come from phi over the corpus vocabulary;
                    # a zero-df word would mean a corpus/model mismatch
                    raise ValidationError(f"word id {w_l} never occurs in the corpus")
                score += math.log((co + 1) / denom)
        scores.append(score)
    return scores, float(np.mean(scores))


def select_plateau(curve: CoherenceCurve, epsilon: float = DEFAULT_PLATEAU_EPSILON,
                   window: int = DEFAULT_PLATEAU_WINDOW) -> int:
    """Smallest K at which the smoothed curve stops improving.

    The curve is smoothed with a centered 3-point moving average; the plateau
    is confirmed when `window` consecutive smoothed improvements fall below
    epsilon, and the selected K is the onset of that flat region (the
    confirmation point minus the smoothing and differencing lag of 2 steps).
    """
    values = [v for _, v in curve.points]
    ks = [k for k, _ in curve.points]
    if len(values) < window + 2:
        raise SelectionError(f"curve too short for plateau detection ({len(values)} points)")
    smoothed = [float(np.mean(values[max(0, i - 1):i + 2])) for i in range(len(values))]
    improvements = [smoothed[i] - smoothed[i - 1] for i in range(1, len(smoothed))]
    for i in range(len(improvements) - window + 1):
        if all(improvements[i + j] < epsilon for j in range(window)):
            onset = max(0, i + 1 - 2)
            return ks[onset]
    raise SelectionError("no plateau found in coherence curve")


def sweep_select_k(corpus: Corpus, k_range: range = range(1, 41),
                   runs_per_k: int = DEFAULT_RUNS_PER_K,
                   epsilon: float = DEFAULT_PLATEAU_EPSILON,
                   window: int = DEFAULT_PLATEAU_WINDOW,
                   top_n: int = 10, iterations: int = 400, base_seed: int = 0,
                   k_override: int | None = None) -> tuple[CoherenceCurve, int | None]:
    """Train one model per K (averaging coherence over several seeds), build
    the curve, and pick K at the plateau. A K override bypasses selection."""
    if len(k_range) == 0:
        raise ValidationError("empty K range")
    vectors, _ = vectorize_tfidf(corpus)
    points = []
    for k in k_range:
        run_means = []
        for run in range(runs_per_k):
            model = train_lda(vectors, k, iterations=iterations, seed=base_seed + run)
            _, mean = topic_coherence(model, corpus, top_n=min(top_n, len(corpus.dictionary)))
            run_means.append(mean)
        points.append((k, float(np.mean(run_means))))
        logger.info("K=%d mean coherence %.4f", k, points[-1][1])
    curve = CoherenceCurve(points=points)
    if k_override is not None:
        return curve, k_override
    try:
        return curve, select_plateau(curve, epsilon=epsilon, window=window)
    except SelectionError:
        logger.warning("no plateau found; returning curve without a selection")
        return curve, None
