"""
Full-network estimation by binding column solutions.

Columns of A are independent weighted-Lasso problems sharing S. They may run
on a thread pool; results are assembled by column index so the estimate does
not depend on scheduling.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from core.moments import EmpiricalMoments, likelihood_fit
from selection.criteria import information_criteria
from solver.active_set import DEFAULT_TOL, ActiveSetState, ColumnProblem, solve_column
from utils.errors import DimensionMismatch, SolverError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NetworkEstimate:
    """
    Inferred coefficient matrix at one penalty level.

    A_hat[i, j] is the effect of variable i at t-1 on variable j at t.
    """

    A_hat: np.ndarray
    rho: float
    df: int
    bic: float
    aic: float
    fit: float
    column_states: Tuple[ActiveSetState, ...] = ()

    @property
    def active_counts(self) -> np.ndarray:
        return np.count_nonzero(self.A_hat, axis=0)


def column_problem(m: EmpiricalMoments, P: np.ndarray, k: int) -> ColumnProblem:
    return ColumnProblem(S=m.S, v=m.V[:, k], lam=P[:, k])


def _solve_one(
    m: EmpiricalMoments,
    P: np.ndarray,
    k: int,
    warm: Optional[ActiveSetState],
    tol: float,
) -> ActiveSetState:
    try:
        return solve_column(column_problem(m, P, k), warm=warm, tol=tol)
    except SolverError as exc:
        raise exc.at_column(k) from exc


def solve_network(
    m: EmpiricalMoments,
    P: np.ndarray,
    warm: Optional[Sequence[ActiveSetState]] = None,
    rho: float = 1.0,
    tol: float = DEFAULT_TOL,
    workers: Optional[int] = None,
) -> NetworkEstimate:
    """
    Solve every column problem with penalties P[:, k] and assemble the network.

    Args:
        m: empirical moments
        P: p x p penalty matrix already scaled to the penalty level
        warm: per-column states from a previous solve (e.g. a larger penalty)
        rho: penalty level recorded on the estimate
        tol: KKT tolerance handed to the column solver
        workers: thread count for column problems; None or 1 runs sequentially
    """
    P = np.asarray(P, dtype=float)
    if P.shape != (m.p, m.p):
        raise DimensionMismatch(f"Penalty matrix has shape {P.shape}, expected {(m.p, m.p)}")
    if warm is not None and len(warm) != m.p:
        raise DimensionMismatch(f"{len(warm)} warm-start states for {m.p} columns")
    starts = list(warm) if warm is not None else [None] * m.p

    if workers is not None and workers > 1 and m.p > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_solve_one, m, P, k, starts[k], tol) for k in range(m.p)
            ]
            states = [future.result() for future in futures]
    else:
        states = [_solve_one(m, P, k, starts[k], tol) for k in range(m.p)]

    A_hat = np.column_stack([state.beta for state in states])
    df, bic_score, aic_score = information_criteria(m, A_hat)
    logger.debug("Network solved at rho=%.4g with df=%d", rho, df)
    return NetworkEstimate(
        A_hat=A_hat,
        rho=float(rho),
        df=df,
        bic=bic_score,
        aic=aic_score,
        fit=likelihood_fit(m, A_hat),
        column_states=tuple(states),
    )
