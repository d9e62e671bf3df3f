"""
Hub / leaf node classification.

Only hubs emit edges, so hub rows of A carry the mass of the network. Classes
are either known from expert knowledge or inferred from an initial estimate A0:
row l1-norms of A0 are clustered by a two-component univariate Gaussian
mixture (unequal variances) and the cluster whose rows have the larger mean
absolute coefficient is labelled hub.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats
from scipy.special import logsumexp

from utils.errors import DegenerateInput

logger = logging.getLogger(__name__)

EM_MAX_ITER = 500
EM_TOL = 1e-8
VARIANCE_FLOOR = 1e-6
LLOYD_MAX_ITER = 100


class NodeClass(Enum):
    HUB = "hub"
    LEAF = "leaf"


class ClassSource(Enum):
    KNOWN = "known"
    INFERRED = "inferred"


@dataclass(frozen=True)
class MixtureFit:
    """Fitted two-component univariate Gaussian mixture."""

    means: Tuple[float, float]
    variances: Tuple[float, float]
    proportions: Tuple[float, float]
    log_likelihood: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class NodeClassification:
    labels: Tuple[NodeClass, ...]
    source: ClassSource = ClassSource.KNOWN
    mixture: Optional[MixtureFit] = None
    # set when inference fell back to the all-leaf classification
    degenerate: bool = False

    @classmethod
    def from_hub_mask(
        cls,
        mask: Union[Sequence[bool], np.ndarray],
        source: ClassSource = ClassSource.KNOWN,
        mixture: Optional[MixtureFit] = None,
    ) -> "NodeClassification":
        labels = tuple(NodeClass.HUB if hub else NodeClass.LEAF for hub in np.asarray(mask))
        return cls(labels=labels, source=source, mixture=mixture)

    @classmethod
    def all_leaf(
        cls, p: int, source: ClassSource, degenerate: bool = False
    ) -> "NodeClassification":
        return cls(labels=(NodeClass.LEAF,) * p, source=source, degenerate=degenerate)

    @property
    def p(self) -> int:
        return len(self.labels)

    @property
    def hub_mask(self) -> np.ndarray:
        return np.array([label is NodeClass.HUB for label in self.labels], dtype=bool)

    @property
    def hub_count(self) -> int:
        return int(self.hub_mask.sum())


def row_l1_norms(A: np.ndarray) -> np.ndarray:
    return np.abs(np.asarray(A, dtype=float)).sum(axis=1)


def _initial_split(values: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Deterministic 2-means: split at the largest gap, then Lloyd refinement."""
    ordered = np.sort(values)
    gaps = np.diff(ordered)
    widest = np.flatnonzero(gaps == gaps.max())
    cut = widest[0] if widest.size == 1 else widest[rng.integers(widest.size)]
    labels = (values > ordered[cut]).astype(int)

    for _ in range(LLOYD_MAX_ITER):
        centers = np.array([values[labels == k].mean() for k in (0, 1)])
        updated = (np.abs(values - centers[1]) < np.abs(values - centers[0])).astype(int)
        if np.array_equal(updated, labels) or np.unique(updated).size < 2:
            break
        labels = updated
    return labels


def fit_gmm_1d(
    values: Union[Sequence[float], np.ndarray],
    seed: int = 0,
    max_iter: int = EM_MAX_ITER,
    tol: float = EM_TOL,
) -> Tuple[np.ndarray, MixtureFit]:
    """
    EM fit of a two-component Gaussian mixture on scalar values.

    Component 0 starts on the lower values. Variances are floored at
    1e-6 times the overall variance. Labels are the components of maximal
    posterior responsibility.

    Raises:
        DegenerateInput: fewer than two values, or all values equal.
    """
    x = np.asarray(values, dtype=float).ravel()
    if x.size < 2:
        raise DegenerateInput("Mixture fitting needs at least two values")
    if np.ptp(x) == 0:
        raise DegenerateInput("All values are equal; no two-cluster structure")

    rng = np.random.default_rng(seed)
    split = _initial_split(x, rng)
    floor = VARIANCE_FLOOR * x.var()
    means = np.array([x[split == k].mean() for k in (0, 1)])
    variances = np.maximum([x[split == k].var() for k in (0, 1)], floor)
    proportions = np.array([np.mean(split == k) for k in (0, 1)])

    previous = -np.inf
    converged = False
    iteration = 0
    for iteration in range(1, max_iter + 1):
        log_joint = np.log(proportions) + stats.norm.logpdf(
            x[:, None], loc=means, scale=np.sqrt(variances)
        )
        log_marginal = logsumexp(log_joint, axis=1)
        log_likelihood = float(log_marginal.sum())
        responsibilities = np.exp(log_joint - log_marginal[:, None])
        if log_likelihood - previous < tol:
            converged = True
            break
        previous = log_likelihood

        weight = np.maximum(responsibilities.sum(axis=0), np.finfo(float).tiny)
        proportions = weight / x.size
        means = responsibilities.T @ x / weight
        variances = np.maximum(
            (responsibilities * (x[:, None] - means) ** 2).sum(axis=0) / weight, floor
        )

    labels = responsibilities.argmax(axis=1)
    fit = MixtureFit(
        means=(float(means[0]), float(means[1])),
        variances=(float(variances[0]), float(variances[1])),
        proportions=(float(proportions[0]), float(proportions[1])),
        log_likelihood=log_likelihood,
        iterations=iteration,
        converged=converged,
    )
    return labels, fit


def infer_classes(A0: np.ndarray, seed: int = 0) -> NodeClassification:
    """
    Infer hubs from an initial estimate A0.

    Falls back to an all-leaf classification (flagged degenerate) when the
    row norms carry no two-cluster structure, e.g. A0 = 0 or A0 = I.
    """
    A0 = np.asarray(A0, dtype=float)
    p = A0.shape[0]
    try:
        labels, fit = fit_gmm_1d(row_l1_norms(A0), seed=seed)
    except DegenerateInput as exc:
        logger.warning("Class inference degenerate (%s); labelling every node leaf", exc)
        return NodeClassification.all_leaf(p, ClassSource.INFERRED, degenerate=True)

    groups = [labels == k for k in (0, 1)]
    if not all(group.any() for group in groups):
        logger.warning("Mixture fit left one class empty; labelling every node leaf")
        return NodeClassification.all_leaf(p, ClassSource.INFERRED, degenerate=True)

    mean_abs = [float(np.abs(A0[group]).mean()) for group in groups]
    if mean_abs[0] == mean_abs[1]:
        logger.warning("Both classes have equal mean coefficient size; labelling every node leaf")
        return NodeClassification.all_leaf(p, ClassSource.INFERRED, degenerate=True)
    hub_label = int(np.argmax(mean_abs))
    return NodeClassification.from_hub_mask(labels == hub_label, ClassSource.INFERRED, fit)
