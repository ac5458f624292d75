"""Visualization payload math: saliency, relevance, intertopic distances and
metadata-grouped topic distributions."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .topics.lda import LdaModel, top_terms

logger = logging.getLogger(__name__)

DEFAULT_LAMBDA = 0.6
TERMS_PER_LIST = 30
DISTANCE_LABEL = "jsd-natural-log"


@dataclass
class TopicCircle:
    topic: int
    x: float
    y: float
    share: float


@dataclass
class LdavisPayload:
    circles: list[TopicCircle]
    salient: list[tuple[str, float]]
    relevant: dict[int, list[tuple[str, float]]]
    lam: float


@dataclass
class MtmvisPayload:
    grouping: str
    groups: list[tuple[str, int, np.ndarray]]  # (label, doc count, distribution)

    def __post_init__(self):
        labels = [g[0] for g in self.groups]
        if len(labels) != len(set(labels)):
            raise ValidationError("group labels must be unique")
        for label, _, dist in self.groups:
            if abs(float(np.sum(dist)) - 1.0) > 1e-9:
                raise ValidationError(f"group {label!r} distribution does not sum to 1")


def topic_prevalence(model: LdaModel) -> np.ndarray:
    """Topic share of the corpus: mean theta column, normalized to sum 1."""
    prevalence = model.theta.mean(axis=0)
    return prevalence / prevalence.sum()


def term_marginals(model: LdaModel) -> np.ndarray:
    """Corpus-level term probabilities: phi weighted by topic prevalence."""
    return topic_prevalence(model) @ model.phi


def saliency(model: LdaModel) -> np.ndarray:
    """saliency(w) = P(w) * sum_T P(T|w) ln(P(T|w) / P(T)).

    The KL-style distinctiveness term is zero when a term is distributed over
    topics exactly like the topic prevalence, so with one topic every
    saliency is zero.
    """
    prevalence = topic_prevalence(model)
    p_w = term_marginals(model)
    joint = prevalence[:, np.newaxis] * model.phi  # P(T, w)
    out = np.zeros(model.phi.shape[1])
    for w in range(model.phi.shape[1]):
        if p_w[w] <= 0:
            continue
        p_t_given_w = joint[:, w] / p_w[w]
        mask = p_t_given_w > 0
        distinct = np.sum(p_t_given_w[mask] * np.log(p_t_given_w[mask] / prevalence[mask]))
        out[w] = p_w[w] * distinct
    return out


def relevance(model: LdaModel, topic: int, lam: float = DEFAULT_LAMBDA,
              n: int = TERMS_PER_LIST) -> list[tuple[int, float]]:
    """r(w, t) = lam * ln(phi[t][w]) + (1 - lam) * ln(phi[t][w] / P(w)).

    Zero-probability terms are excluded; ranking is descending with
    dictionary-id tie-break.
    """
    if not (0.0 <= lam <= 1.0):
        raise ValidationError("lambda must lie in [0, 1]")
    if not (0 <= topic < model.K):
        raise ValidationError(f"topic index out of range: {topic}")
    p_w = term_marginals(model)
    phi_t = model.phi[topic]
    scores = []
    for w in range(len(phi_t)):
        if phi_t[w] <= 0 or p_w[w] <= 0:
            continue
        r = lam * np.log(phi_t[w]) + (1 - lam) * np.log(phi_t[w] / p_w[w])
        scores.append((w, float(r)))
    scores.sort(key=lambda item: (-item[1], item[0]))
    return scores[:min(n, len(scores))]


def jensen_shannon(p: np.ndarray, q: np.ndarray) -> float:
    """JSD in natural log; bounded by ln 2."""
    m = 0.5 * (p + q)

    def kl(a, b):
        mask = a > 0
        return float(np.sum(a[mask] * np.log(a[mask] / b[mask])))

    return 0.5 * kl(p, m) + 0.5 * kl(q, m)


def jsd_matrix(model: LdaModel) -> np.ndarray:
    dist = np.zeros((model.K, model.K))
    for i in range(model.K):
        for j in range(i + 1, model.K):
            d = jensen_shannon(model.phi[i], model.phi[j])
            dist[i, j] = dist[j, i] = d
    return dist


def classical_mds(distances: np.ndarray, dims: int = 2) -> np.ndarray:
    """Principal-coordinates MDS on the double-centered squared distances.

    The sign of each coordinate is fixed by making its largest-magnitude
    entry positive, removing the eigen-solver's reflection ambiguity. Rank
    deficits leave trailing coordinates at zero.
    """
    n = distances.shape[0]
    if n == 1:
        return np.zeros((1, dims))
    centering = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * centering @ (distances ** 2) @ centering
    evals, evecs = np.linalg.eigh(b)
    order = np.argsort(evals)[::-1]
    coords = np.zeros((n, dims))
    for d in range(dims):
        if d >= n or evals[order[d]] <= 1e-12:
            continue
        axis = evecs[:, order[d]] * np.sqrt(evals[order[d]])
        pivot = np.argmax(np.abs(axis))
        if axis[pivot] < 0:
            axis = -axis
        coords[:, d] = axis
    return coords


def intertopic_map(model: LdaModel) -> list[TopicCircle]:
    """2-D topic circles: classical MDS over the pairwise JSD matrix, with
    circle share taken from topic prevalence."""
    distances = jsd_matrix(model)
    coords = classical_mds(distances)
    shares = topic_prevalence(model)
    return [TopicCircle(t, float(coords[t, 0]), float(coords[t, 1]), float(shares[t]))
            for t in range(model.K)]


def ldavis_payload(model: LdaModel, id2token: list[str],
                   lam: float = DEFAULT_LAMBDA) -> LdavisPayload:
    circles = intertopic_map(model)
    sal = saliency(model)
    order = np.lexsort((np.arange(len(sal)), -sal))
    n = min(TERMS_PER_LIST, len(sal))
    salient = [(id2token[w], float(sal[w])) for w in order[:n]]
    relevant = {}
    for topic in range(model.K):
        relevant[topic] = [(id2token[w], value)
                           for w, value in relevance(model, topic, lam=lam)]
    return LdavisPayload(circles=circles, salient=salient, relevant=relevant, lam=lam)


def write_ldavis_json(payload: LdavisPayload, path: str | Path):
    doc = {
        "circles": [{"topic": c.topic, "x": c.x, "y": c.y, "share": c.share}
                    for c in payload.circles],
        "salient": [{"term": t, "value": v} for t, v in payload.salient],
        "relevant": {str(topic): [{"term": t, "value": v} for t, v in terms]
                     for topic, terms in payload.relevant.items()},
        "lambda": payload.lam,
        "distance": DISTANCE_LABEL,
    }
    Path(path).write_text(json.dumps(doc, indent=2))


def mtm_aggregate(theta: np.ndarray, doc_ids: list[str],
                  metadata: dict[str, list[str]], grouping: str,
                  others_threshold: int = 0) -> MtmvisPayload:
    """Group mean theta rows by metadata label; multi-label documents count
    once per label.

    Labels with fewer than ``others_threshold`` documents collapse into an
    "Others" group.
    """
    if theta.shape[0] != len(doc_ids):
        raise ValidationError("theta row count does not match doc ids")
    members: dict[str, list[int]] = {}
    for i, doc_id in enumerate(doc_ids):
        for label in metadata.get(doc_id, []):
            members.setdefault(label, []).append(i)

    if others_threshold > 0:
        small = [label for label, rows in members.items() if len(rows) < others_threshold]
        if small:
            pooled: list[int] = []
            for label in small:
                pooled.extend(members.pop(label))
            if pooled:
                members["Others"] = pooled

    groups = []
    for label in sorted(members):
        rows = members[label]
        if not rows:
            logger.warning("group %r is empty; excluded", label)
            continue
        mean = theta[rows].mean(axis=0)
        mean = mean / mean.sum()
        groups.append((label, len(rows), mean))
    return MtmvisPayload(grouping=grouping, groups=groups)


def write_mtm_json(payload: MtmvisPayload, path: str | Path):
    doc = {
        "grouping": payload.grouping,
        "groups": [{"label": label, "count": count, "dist": [float(x) for x in dist]}
                   for label, count, dist in payload.groups],
    }
    Path(path).write_text(json.dumps(doc, indent=2))
