"""
Penalty grids and warm-started regularization paths.

The path starts at the smallest penalty level giving the null model and walks
down a logarithmic grid, each network warm-started from the previous one. It
stops early once some column holds as many coefficients as the data allow,
min(n, p), beyond which the active block of S is singular.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from core.moments import EmpiricalMoments
from penalty.classes import NodeClassification
from penalty.weights import PenaltyMatrix, PenaltySpec, build_penalty
from selection.criteria import Criterion, score
from solver.active_set import DEFAULT_TOL
from solver.network import NetworkEstimate, solve_network
from utils.errors import (
    AllInfinitePenalties,
    DimensionMismatch,
    EmptyPath,
    InvalidGrid,
    SingularActiveBlock,
    SolverError,
)

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 50
DEFAULT_TERMINAL_RATIO = 0.01


class StopReason(Enum):
    GRID_EXHAUSTED = "grid_exhausted"
    COLUMN_CAPACITY_REACHED = "column_capacity_reached"
    SOLVER_FAILURE = "solver_failure"


@dataclass(frozen=True, eq=False)
class PenaltyPath:
    """
    Estimates along a decreasing grid.

    estimates may be shorter than grid when the path stopped early; the
    estimate at position k was computed at grid[k].
    """

    grid: Tuple[float, ...]
    estimates: Tuple[NetworkEstimate, ...]
    stop_reason: StopReason
    message: Optional[str] = None
    base: Optional[PenaltyMatrix] = field(default=None, repr=False)

    @property
    def classes(self) -> Optional[NodeClassification]:
        return self.base.classes if self.base is not None else None

    def __len__(self) -> int:
        return len(self.estimates)


def rho_max(m: EmpiricalMoments, base: PenaltyMatrix) -> float:
    """
    Smallest global level at which every coefficient is zero.

    At beta = 0 the optimality condition of column k reads |V_ik| <= rho base_ik,
    so the null level is the largest |V_ik| / base_ik over finite positive base
    entries. Unpenalized coordinates are ignored.
    """
    P = np.asarray(base.P, dtype=float)
    if P.shape != (m.p, m.p):
        raise DimensionMismatch(f"Base penalty has shape {P.shape}, expected {(m.p, m.p)}")
    usable = np.isfinite(P) & (P > 0)
    if not usable.any():
        raise AllInfinitePenalties()
    return float(np.max(np.abs(m.V[usable]) / P[usable]))


def make_grid(
    rho_max_value: float,
    size: int = DEFAULT_GRID_SIZE,
    decay: Optional[float] = None,
    terminal_ratio: float = DEFAULT_TERMINAL_RATIO,
) -> Tuple[float, ...]:
    """
    Logarithmic grid rho_max * decay^k, k = 0..size-1.

    Without an explicit decay the last point is rho_max * terminal_ratio.
    """
    if size < 2:
        raise InvalidGrid(f"Grid needs at least two points, got {size}")
    if not (np.isfinite(rho_max_value) and rho_max_value > 0):
        raise InvalidGrid(f"Grid must start at a positive level, got {rho_max_value}")
    if decay is None:
        if not 0 < terminal_ratio < 1:
            raise InvalidGrid(f"Terminal ratio must lie in (0, 1), got {terminal_ratio}")
        decay = terminal_ratio ** (1.0 / (size - 1))
    if not 0 < decay < 1:
        raise InvalidGrid(f"Grid decay must lie in (0, 1), got {decay}")
    return tuple(float(rho_max_value * decay**k) for k in range(size))


def default_grid(
    m: EmpiricalMoments,
    base: PenaltyMatrix,
    size: int = DEFAULT_GRID_SIZE,
    terminal_ratio: float = DEFAULT_TERMINAL_RATIO,
) -> Tuple[float, ...]:
    return make_grid(rho_max(m, base), size=size, terminal_ratio=terminal_ratio)


def _validate_grid(grid: Sequence[float]) -> Tuple[float, ...]:
    values = tuple(float(rho) for rho in grid)
    if not values:
        raise InvalidGrid("Penalty grid is empty")
    if not all(np.isfinite(rho) and rho > 0 for rho in values):
        raise InvalidGrid("Penalty grid values must be positive and finite")
    if any(later >= earlier for earlier, later in zip(values, values[1:])):
        raise InvalidGrid("Penalty grid must be strictly decreasing")
    return values


def solve_path(
    m: EmpiricalMoments,
    spec: PenaltySpec,
    grid: Sequence[float],
    base: Optional[PenaltyMatrix] = None,
    tol: float = DEFAULT_TOL,
    workers: Optional[int] = None,
) -> PenaltyPath:
    """
    Solve the network at every grid level in decreasing order with warm starts.

    Args:
        m: empirical moments
        spec: penalty specification; its own rho is ignored, the grid sets the level
        grid: strictly decreasing positive levels
        base: penalty matrix at rho = 1, built from spec when omitted
        tol: KKT tolerance for the column solver
        workers: threads for column problems
    """
    levels = _validate_grid(grid)
    if base is None:
        base = build_penalty(spec.at_level(1.0), m.p)
    capacity = min(m.n, m.p)

    estimates = []
    warm = None
    stop_reason = StopReason.GRID_EXHAUSTED
    message: Optional[str] = None
    for rho in levels:
        try:
            estimate = solve_network(
                m, base.scaled(rho).P, warm=warm, rho=rho, tol=tol, workers=workers
            )
        except SingularActiveBlock as exc:
            stop_reason = StopReason.COLUMN_CAPACITY_REACHED
            message = str(exc)
            logger.debug("Path stopped at rho=%.4g: %s", rho, exc)
            break
        except SolverError as exc:
            stop_reason = StopReason.SOLVER_FAILURE
            message = str(exc)
            logger.warning("Path aborted at rho=%.4g: %s", rho, exc)
            break

        estimates.append(estimate)
        warm = estimate.column_states
        if int(estimate.active_counts.max(initial=0)) >= capacity:
            stop_reason = StopReason.COLUMN_CAPACITY_REACHED
            message = f"a column reached {capacity} active coefficients at rho={rho:.6g}"
            logger.debug("Path stopped: %s", message)
            break

    logger.info(
        "Path computed %d/%d level(s), stop reason %s",
        len(estimates),
        len(levels),
        stop_reason.value,
    )
    return PenaltyPath(
        grid=levels,
        estimates=tuple(estimates),
        stop_reason=stop_reason,
        message=message,
        base=base,
    )


def select_best(path: PenaltyPath, criterion: Criterion = Criterion.BIC) -> NetworkEstimate:
    """Estimate of maximal criterion; ties go to the larger penalty level."""
    if not path.estimates:
        raise EmptyPath()
    best = path.estimates[0]
    best_score = score(best, criterion)
    for estimate in path.estimates[1:]:
        current = score(estimate, criterion)
        if current > best_score:
            best, best_score = estimate, current
    return best
