"""Batch variational-Bayes LDA over (possibly fractional) document-term weights."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import psi

from ..errors import RetraceError, ValidationError

logger = logging.getLogger(__name__)

ROW_SUM_TOL = 1e-9
_MEANCHANGE_THRESH = 1e-8
_INNER_ITERATIONS = 100


class NumericalError(RetraceError):
    def __init__(self, message: str, iteration: int):
        super().__init__(f"{message} (iteration {iteration})")
        self.iteration = iteration


@dataclass
class LdaModel:
    K: int
    phi: np.ndarray    # K x V topic-word distributions
    theta: np.ndarray  # D x K document-topic distributions
    alpha: float
    eta: float
    seed: int
    iterations: int

    def __post_init__(self):
        if self.K < 1:
            raise ValidationError("K must be >= 1")
        for name, rows in (("phi", self.phi), ("theta", self.theta)):
            if np.any(rows < 0):
                raise ValidationError(f"{name} has negative entries")
            if not np.allclose(rows.sum(axis=1), 1.0, atol=ROW_SUM_TOL, rtol=0):
                raise ValidationError(f"{name} rows do not sum to 1")

    def save(self, directory: str | Path, dictionary=None, measure: str = "umass"):
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        np.savetxt(directory / "phi.csv", self.phi, delimiter=",")
        np.savetxt(directory / "theta.csv", self.theta, delimiter=",")
        if dictionary is not None:
            dictionary.save(directory / "dictionary.csv")
        meta = {"K": self.K, "alpha": self.alpha, "eta": self.eta,
                "seed": self.seed, "iterations": self.iterations, "measure": measure}
        (directory / "meta.json").write_text(json.dumps(meta, indent=2))

    @classmethod
    def load(cls, directory: str | Path) -> "LdaModel":
        directory = Path(directory)
        meta = json.loads((directory / "meta.json").read_text())
        phi = np.loadtxt(directory / "phi.csv", delimiter=",", ndmin=2)
        theta = np.loadtxt(directory / "theta.csv", delimiter=",", ndmin=2)
        return cls(K=meta["K"], phi=phi, theta=theta, alpha=meta["alpha"],
                   eta=meta["eta"], seed=meta["seed"], iterations=meta["iterations"])


def _dirichlet_expectation(params: np.ndarray) -> np.ndarray:
    if params.ndim == 1:
        return psi(params) - psi(params.sum())
    return psi(params) - psi(params.sum(axis=1))[:, np.newaxis]


def train_lda(vectors: np.ndarray, K: int, alpha: float | None = None,
              eta: float | None = None, iterations: int = 400,
              seed: int = 0) -> LdaModel:
    """Fit LDA by batch variational Bayes.

    Accepts fractional counts (e.g. TF-IDF weights), so inference is the
    EM-style variational update rather than collapsed Gibbs. The run is fully
    determined by the seed.
    """
    vectors = np.asarray(vectors, dtype=float)
    if vectors.ndim != 2 or vectors.size == 0:
        raise ValidationError("vectors must be a non-empty D x V matrix")
    if K < 1:
        raise ValidationError("K must be >= 1")
    num_docs, vocab = vectors.shape
    if K > num_docs:
        logger.warning("K=%d exceeds the number of documents (%d)", K, num_docs)
    alpha = 1.0 / K if alpha is None else alpha
    eta = 1.0 / K if eta is None else eta

    rng = np.random.default_rng(seed)
    lam = rng.gamma(100.0, 1.0 / 100.0, (K, vocab))
    gamma = rng.gamma(100.0, 1.0 / 100.0, (num_docs, K))

    doc_ids = [np.nonzero(vectors[d])[0] for d in range(num_docs)]
    doc_cts = [vectors[d, ids] for d, ids in zip(range(num_docs), doc_ids)]

    for it in range(iterations):
        elog_beta = _dirichlet_expectation(lam)
        exp_elog_beta = np.exp(elog_beta)
        sstats = np.zeros((K, vocab))
        for d in range(num_docs):
            ids, cts = doc_ids[d], doc_cts[d]
            if ids.size == 0:
                continue
            gamma_d = gamma[d]
            exp_elog_theta_d = np.exp(_dirichlet_expectation(gamma_d))
            beta_d = exp_elog_beta[:, ids]
            phinorm = exp_elog_theta_d @ beta_d + 1e-100
            for _ in range(_INNER_ITERATIONS):
                last_gamma = gamma_d
                gamma_d = alpha + exp_elog_theta_d * ((cts / phinorm) @ beta_d.T)
                exp_elog_theta_d = np.exp(_dirichlet_expectation(gamma_d))
                phinorm = exp_elog_theta_d @ beta_d + 1e-100
                if np.mean(np.abs(gamma_d - last_gamma)) < _MEANCHANGE_THRESH:
                    break
            gamma[d] = gamma_d
            sstats[:, ids] += np.outer(exp_elog_theta_d, cts / phinorm) * beta_d
        lam = eta + sstats
        if not np.all(np.isfinite(lam)) or not np.all(np.isfinite(gamma)):
            raise NumericalError("non-finite variational parameters", it)

    phi = lam / lam.sum(axis=1, keepdims=True)
    theta = gamma / gamma.sum(axis=1, keepdims=True)
    return LdaModel(K=K, phi=phi, theta=theta, alpha=alpha, eta=eta,
                    seed=seed, iterations=iterations)


def top_terms(model: LdaModel, topic: int, n: int = 30) -> list[int]:
    """Term ids of a topic ranked by descending probability, ties broken by id."""
    if not (0 <= topic < model.K):
        raise ValidationError(f"topic index out of range: {topic}")
    vocab = model.phi.shape[1]
    n = min(n, vocab)
    order = np.lexsort((np.arange(vocab), -model.phi[topic]))
    return list(order[:n])


def doc_topic_table(model: LdaModel, doc_ids: list[str] | None = None) -> list[tuple[str, np.ndarray]]:
    """Per-document topic representativeness (theta rows keyed by doc id)."""
    ids = doc_ids or [str(i) for i in range(model.theta.shape[0])]
    if len(ids) != model.theta.shape[0]:
        raise ValidationError("doc id count does not match theta")
    return [(doc_id, model.theta[i]) for i, doc_id in enumerate(ids)]
