"""TF-IDF document vectorization (raw tf x log2 idf, L2 document norm)."""

from __future__ import annotations

import logging
from collections import Counter

import numpy as np

from ..errors import ValidationError
from .corpus import Corpus

logger = logging.getLogger(__name__)


def vectorize_tfidf(corpus: Corpus) -> tuple[np.ndarray, list[int]]:
    """Weight matrix (D x V) with weight(t, d) = tf * log2(D / df), rows
    L2-normalized.

    Terms present in every document get weight 0 before normalization.
    Returns the matrix and the indices of documents whose vectors collapsed
    to zero (flagged, kept in place).
    """
    if len(corpus) == 0:
        raise ValidationError("cannot vectorize an empty corpus")
    num_docs = len(corpus)
    vocab = len(corpus.dictionary)
    idf = np.zeros(vocab)
    for tid in range(vocab):
        df = corpus.dictionary.doc_freq[tid]
        idf[tid] = np.log2(num_docs / df) if df else 0.0

    matrix = np.zeros((num_docs, vocab))
    flagged: list[int] = []
    for d, ids in enumerate(corpus.token_ids()):
        for tid, tf in Counter(ids).items():
            matrix[d, tid] = tf * idf[tid]
        norm = np.linalg.norm(matrix[d])
        if norm == 0.0:
            flagged.append(d)
            logger.warning("document %d has a zero tf-idf vector (all terms ubiquitous)",
                           d)
        else:
            matrix[d] /= norm
    return matrix, flagged
