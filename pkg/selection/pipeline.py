"""
End-to-end fit of one penalty regime on empirical moments.

Adaptive and inferred-classes regimes first compute a plain-Lasso path and
keep its criterion-selected estimate as the initial matrix A0. The structured
penalty is then built from A0 (or from known classes), a second path is
computed and the final model is selected on it.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from core.moments import EmpiricalMoments
from penalty.classes import NodeClassification
from penalty.weights import DEFAULT_RATIO, PenaltyRegime, PenaltySpec, build_penalty
from selection.criteria import Criterion
from selection.path import (
    DEFAULT_GRID_SIZE,
    DEFAULT_TERMINAL_RATIO,
    PenaltyPath,
    default_grid,
    select_best,
    solve_path,
)
from solver.active_set import DEFAULT_TOL
from solver.network import NetworkEstimate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PathSettings:
    grid_size: int = DEFAULT_GRID_SIZE
    terminal_ratio: float = DEFAULT_TERMINAL_RATIO
    tol: float = DEFAULT_TOL
    workers: Optional[int] = None


@dataclass(frozen=True, eq=False)
class RegimeFit:
    regime: PenaltyRegime
    criterion: Criterion
    best: NetworkEstimate
    path: PenaltyPath
    classes: Optional[NodeClassification] = None
    initial: Optional[NetworkEstimate] = None
    initial_path: Optional[PenaltyPath] = None

    @property
    def null_selected(self) -> bool:
        return self.best.df == 0


def _run_path(
    m: EmpiricalMoments, spec: PenaltySpec, settings: PathSettings
) -> PenaltyPath:
    base = build_penalty(spec.at_level(1.0), m.p)
    if not np.any(np.isfinite(base.P) & (base.P > 0)):
        # every coefficient excluded or free: the only level that matters is one
        logger.info("No finite positive penalty weight; solving at a single level")
        grid: Tuple[float, ...] = (1.0,)
    else:
        grid = default_grid(m, base, settings.grid_size, settings.terminal_ratio)
    return solve_path(m, spec, grid, base=base, tol=settings.tol, workers=settings.workers)


def initial_estimate(
    m: EmpiricalMoments,
    criterion: Criterion = Criterion.BIC,
    settings: Optional[PathSettings] = None,
) -> Tuple[PenaltyPath, NetworkEstimate]:
    """Plain-Lasso path and its criterion-selected estimate."""
    settings = settings or PathSettings()
    path = _run_path(m, PenaltySpec(PenaltyRegime.LASSO), settings)
    return path, select_best(path, criterion)


def fit_regime(
    m: EmpiricalMoments,
    regime: PenaltyRegime,
    criterion: Criterion = Criterion.BIC,
    init_criterion: Criterion = Criterion.BIC,
    classes: Optional[NodeClassification] = None,
    ratio: float = DEFAULT_RATIO,
    individual: Optional[np.ndarray] = None,
    normalize: bool = True,
    seed: int = 0,
    settings: Optional[PathSettings] = None,
    initial: Optional[Tuple[PenaltyPath, NetworkEstimate]] = None,
) -> RegimeFit:
    """
    Fit one regime and select the final model.

    Args:
        m: empirical moments of the standardized data
        regime: penalty regime
        criterion: criterion selecting the final model
        init_criterion: criterion selecting A0 on the plain-Lasso path
        classes: node classes for the known-classes regime
        ratio: leaf/hub penalty ratio for class regimes
        individual: optional individual weights rho_ij
        normalize: normalize class weights to a unit mean
        seed: seed for class inference tie-breaking
        settings: grid and solver settings
        initial: precomputed plain-Lasso (path, selected estimate) to reuse
    """
    settings = settings or PathSettings()
    initial_path: Optional[PenaltyPath] = None
    A0: Optional[np.ndarray] = None
    init_estimate: Optional[NetworkEstimate] = None
    if regime in (PenaltyRegime.ADAPTIVE, PenaltyRegime.INFERRED_CLASSES):
        if initial is None:
            initial = initial_estimate(m, init_criterion, settings)
        initial_path, init_estimate = initial
        A0 = init_estimate.A_hat
        logger.debug("Initial estimate at rho=%.4g with df=%d", init_estimate.rho, init_estimate.df)

    spec = PenaltySpec(
        regime=regime,
        ratio=ratio,
        init=A0,
        classes=classes,
        individual=individual,
        normalize=normalize,
        seed=seed,
    )
    path = _run_path(m, spec, settings)
    best = select_best(path, criterion)
    logger.info(
        "Regime %s selected rho=%.4g with df=%d by %s",
        regime.value,
        best.rho,
        best.df,
        criterion.value,
    )
    return RegimeFit(
        regime=regime,
        criterion=criterion,
        best=best,
        path=path,
        classes=path.classes,
        initial=init_estimate,
        initial_path=initial_path,
    )
