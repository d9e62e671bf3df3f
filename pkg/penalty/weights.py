"""
Penalty matrices for the four weighting regimes.

Entry (i, j) of the penalty matrix weights coefficient A_ij, the edge from
node i to node j:

- lasso: 1
- adaptive: max(1/|init_ij|, 1), +inf where init_ij = 0
- known / inferred classes: rho_hub on hub rows, rho_leaf on leaf rows

times the global level rho and the optional individual weight rho_ij.
Class weights only depend on the origin of an edge, hence on the row.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from penalty.classes import NodeClassification, infer_classes
from utils.errors import (
    DimensionMismatch,
    MissingClassification,
    MissingInit,
    NonPositiveRho,
    PenaltyError,
)

logger = logging.getLogger(__name__)

DEFAULT_RATIO = 2.0


class PenaltyRegime(Enum):
    LASSO = "lasso"
    ADAPTIVE = "adaptive"
    KNOWN_CLASSES = "known"
    INFERRED_CLASSES = "inferred"


@dataclass(frozen=True, eq=False)
class PenaltySpec:
    """Everything needed to build a penalty matrix at one global level rho."""

    regime: PenaltyRegime
    rho: float = 1.0
    ratio: float = DEFAULT_RATIO
    init: Optional[np.ndarray] = None
    classes: Optional[NodeClassification] = None
    individual: Optional[np.ndarray] = None
    # class weights averaged to 1 over rows
    normalize: bool = True
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.ratio > 1:
            raise PenaltyError(f"Leaf/hub penalty ratio must exceed 1, got {self.ratio}")
        if self.individual is not None:
            individual = np.asarray(self.individual, dtype=float)
            if np.any(np.isnan(individual)) or np.any(individual < 0):
                raise PenaltyError("Individual penalty weights must be nonnegative")
            object.__setattr__(self, "individual", individual)

    def at_level(self, rho: float) -> "PenaltySpec":
        return replace(self, rho=rho)


@dataclass(frozen=True, eq=False)
class PenaltyMatrix:
    P: np.ndarray
    # classification used for class-based regimes
    classes: Optional[NodeClassification] = None

    @property
    def p(self) -> int:
        return int(self.P.shape[0])

    def scaled(self, rho: float) -> "PenaltyMatrix":
        """Multiply every finite entry by rho; infinite entries stay infinite."""
        if not rho > 0:
            raise NonPositiveRho(rho)
        P = np.where(np.isinf(self.P), np.inf, rho * self.P)
        return PenaltyMatrix(P=P, classes=self.classes)


def adaptive_individual_weights(init: np.ndarray) -> np.ndarray:
    """max(1/|init|, 1) entrywise, +inf on exact zeros of the initial estimate."""
    magnitude = np.abs(np.asarray(init, dtype=float))
    weights = np.full(magnitude.shape, np.inf)
    nonzero = magnitude != 0
    weights[nonzero] = np.maximum(1.0 / magnitude[nonzero], 1.0)
    return weights


def class_weights(
    classes: NodeClassification, ratio: float = DEFAULT_RATIO, normalize: bool = True
) -> Tuple[float, float]:
    """
    Return (rho_hub, rho_leaf) with rho_leaf = ratio * rho_hub.

    With normalization the class-size-weighted mean of the row weights is 1;
    otherwise rho_hub = 1.
    """
    if not normalize:
        return 1.0, ratio
    hubs = classes.hub_count
    leaves = classes.p - hubs
    rho_hub = classes.p / (hubs + leaves * ratio)
    return rho_hub, ratio * rho_hub


def _require_square(matrix: np.ndarray, p: int, what: str) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (p, p):
        raise DimensionMismatch(f"{what} has shape {matrix.shape}, expected {(p, p)}")
    return matrix


def build_penalty(spec: PenaltySpec, p: int) -> PenaltyMatrix:
    """
    Build the p x p penalty matrix for spec.

    Raises:
        MissingInit: adaptive or inferred regime without an initial estimate
        MissingClassification: known regime without classes
        NonPositiveRho: spec.rho <= 0
    """
    if not spec.rho > 0:
        raise NonPositiveRho(spec.rho)

    classes: Optional[NodeClassification] = None
    if spec.regime is PenaltyRegime.LASSO:
        weights = np.ones((p, p))
    elif spec.regime is PenaltyRegime.ADAPTIVE:
        if spec.init is None:
            raise MissingInit(spec.regime.value)
        weights = adaptive_individual_weights(_require_square(spec.init, p, "Initial estimate"))
    else:
        if spec.regime is PenaltyRegime.KNOWN_CLASSES:
            if spec.classes is None:
                raise MissingClassification()
            classes = spec.classes
        else:
            if spec.init is None:
                raise MissingInit(spec.regime.value)
            classes = infer_classes(_require_square(spec.init, p, "Initial estimate"), spec.seed)
        if classes.p != p:
            raise DimensionMismatch(f"Classification covers {classes.p} nodes, expected {p}")
        rho_hub, rho_leaf = class_weights(classes, spec.ratio, spec.normalize)
        row_weight = np.where(classes.hub_mask, rho_hub, rho_leaf)
        weights = np.repeat(row_weight[:, None], p, axis=1)
        logger.debug(
            "Class weights hub=%.4g leaf=%.4g for %d hub(s)", rho_hub, rho_leaf, classes.hub_count
        )

    if spec.individual is None:
        individual = np.ones((p, p))
    else:
        individual = _require_square(spec.individual, p, "Individual weights")
    infinite = np.isinf(weights) | np.isinf(individual)
    with np.errstate(invalid="ignore"):
        P = spec.rho * individual * weights
    P[infinite] = np.inf
    return PenaltyMatrix(P=P, classes=classes)
