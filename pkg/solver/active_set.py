"""
Active-set solver for one column of the weighted-Lasso VAR(1) problem.

Each column k of A minimises

    L(beta) = beta' S beta / 2 - beta' v + sum_i lambda_i |beta_i|

with v = V^k and lambda the k-th column of the penalty matrix. The solver works
on the set of nonzero coefficients only:

1. Optimization over the active set: Newton step on the active block with the
   sign of beta approximated by the current sign vector theta. A step that
   would flip a sign is shortened to the first zero crossing and the
   coefficient that reaches zero leaves the active set. When the active block
   is singular (more active coefficients than rank(S)), the step moves along
   its null space instead until a coefficient reaches zero.
2. Deactivation of coefficients that vanished during the step.
3. Optimality test: the inactive coordinate with the largest violation of the
   subgradient condition enters the active set; none left means optimal.

Infinite penalties lock a coefficient at zero. Zero penalties make a coordinate
smooth, so no sign consistency is enforced on it.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Set, Tuple

import numpy as np
from scipy import linalg

from utils.errors import DimensionMismatch, NonConvergence, SingularActiveBlock

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
# magnitude under which a coefficient is stored as an exact zero
ZERO_THRESHOLD = 1e-12
ACTIVE_CONDITION_CAP = 1e12
# relative size of the null-space slope below which the objective is flat
NULL_SLOPE_TOL = 1e-10
ITERATIONS_PER_VARIABLE = 50


@dataclass(frozen=True, eq=False)
class ColumnProblem:
    S: np.ndarray
    v: np.ndarray
    lam: np.ndarray

    def __post_init__(self) -> None:
        S = np.asarray(self.S, dtype=float)
        v = np.asarray(self.v, dtype=float).ravel()
        lam = np.asarray(self.lam, dtype=float).ravel()
        p = v.size
        if S.shape != (p, p) or lam.size != p:
            raise DimensionMismatch(
                f"Inconsistent column problem: S {S.shape}, v {v.shape}, lambda {lam.shape}"
            )
        if np.any(np.isnan(lam)) or np.any(lam < 0):
            raise ValueError("Penalty weights must be nonnegative")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "lam", lam)

    @property
    def p(self) -> int:
        return int(self.v.size)


@dataclass(frozen=True, eq=False)
class ActiveSetState:
    beta: np.ndarray
    active: Tuple[int, ...]
    theta: np.ndarray
    iterations: int = field(default=0, compare=False)

    @property
    def size(self) -> int:
        return len(self.active)


def gradient(prob: ColumnProblem, beta: np.ndarray) -> np.ndarray:
    """Gradient of the smooth part, S beta - v."""
    return prob.S @ beta - prob.v


def column_objective(prob: ColumnProblem, beta: np.ndarray) -> float:
    beta = np.asarray(beta, dtype=float)
    nonzero = beta != 0
    if np.any(np.isinf(prob.lam[nonzero])):
        return float("inf")
    penalty = float(np.sum(prob.lam[nonzero] * np.abs(beta[nonzero])))
    return float(0.5 * beta @ prob.S @ beta - beta @ prob.v) + penalty


def kkt_residual(prob: ColumnProblem, beta: np.ndarray) -> float:
    """Largest distance from 0 to the subdifferential of L at beta, per coordinate."""
    beta = np.asarray(beta, dtype=float).ravel()
    if beta.size != prob.p:
        raise DimensionMismatch(f"beta has {beta.size} entries, problem has {prob.p}")
    grad = gradient(prob, beta)
    finite = np.isfinite(prob.lam)
    nonzero = beta != 0
    if np.any(nonzero & ~finite):
        return float("inf")

    residual = np.zeros(prob.p)
    on = nonzero
    residual[on] = np.abs(grad[on] + prob.lam[on] * np.sign(beta[on]))
    off = ~nonzero & finite
    residual[off] = np.maximum(np.abs(grad[off]) - prob.lam[off], 0.0)
    return float(residual.max()) if residual.size else 0.0


def _null_space(S_AA: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the numerically singular directions of S_AA."""
    eigenvalues, vectors = np.linalg.eigh(S_AA)
    floor = max(float(eigenvalues[-1]), 0.0) / ACTIVE_CONDITION_CAP
    return vectors[:, eigenvalues <= floor]


def _solve_active_block(S_AA: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        return linalg.cho_solve(linalg.cho_factor(S_AA), rhs)
    except linalg.LinAlgError as e:
        raise SingularActiveBlock(
            f"active block of size {S_AA.shape[0]} is not positive definite"
        ) from e


def _degenerate_step(
    current: np.ndarray,
    theta: np.ndarray,
    slope: np.ndarray,
    null: np.ndarray,
    penalized: np.ndarray,
) -> Tuple[np.ndarray, float]:
    """
    Move along a null direction of a singular active block until a penalized
    coefficient reaches zero.

    The objective is linear along null directions: it decreases with slope
    -|N'slope|^2 along the projected descent direction, or stays flat when the
    slope has no null component. Returns the moved coefficients, with the ones
    reaching zero set to exactly zero, and the step length.

    Raises:
        SingularActiveBlock: no penalized coefficient stops the move, so the
            objective is unbounded below or its minimiser is not unique.
    """
    descent = -null @ (null.T @ slope)
    if np.linalg.norm(descent) > NULL_SLOPE_TOL * max(1.0, float(np.linalg.norm(slope))):
        directions = [descent]
    else:
        directions = [sign * null[:, j] for j in range(null.shape[1]) for sign in (1.0, -1.0)]

    for d in directions:
        d = np.where(np.abs(d) <= ZERO_THRESHOLD * np.abs(d).max(), 0.0, d)
        gammas = np.full(current.size, np.inf)
        shrinking = penalized & (current * d < 0)
        gammas[shrinking] = -current[shrinking] / d[shrinking]
        gammas[penalized & (current == 0) & (theta * d < 0)] = 0.0
        gamma = float(gammas.min())
        if np.isfinite(gamma):
            moved = current + gamma * d
            moved[gammas <= gamma] = 0.0
            return moved, gamma
    raise SingularActiveBlock(
        f"active block of size {current.size} is singular and no coefficient "
        f"bounds the objective along its {null.shape[1]} null direction(s)"
    )


def _sign_consistent_step(
    current: np.ndarray, candidate: np.ndarray, theta: np.ndarray, penalized: np.ndarray
) -> Tuple[np.ndarray, bool]:
    """
    Step from current towards the active-block solution, shortened at the
    first sign change. Returns the new coefficients and whether the step was full.
    """
    h = candidate - current
    inconsistent = penalized & (np.sign(candidate) != theta)
    crossing = inconsistent & (current != 0)
    if not np.any(crossing):
        updated = candidate.copy()
        updated[inconsistent] = 0.0
        return updated, True
    gammas = np.full(current.size, np.inf)
    gammas[crossing] = -current[crossing] / h[crossing]
    gamma = float(gammas.min())
    updated = current + gamma * h
    updated[(gammas <= gamma) | (inconsistent & (current == 0))] = 0.0
    logger.debug("Partial step gamma=%.3g", gamma)
    return updated, False


def _initial_state(prob: ColumnProblem, warm: Optional[ActiveSetState]) -> Tuple[np.ndarray, list]:
    beta = np.zeros(prob.p)
    if warm is None:
        return beta, []
    if warm.beta.shape != (prob.p,):
        raise DimensionMismatch(
            f"Warm start has {warm.beta.size} coefficients, problem has {prob.p}"
        )
    finite = np.isfinite(prob.lam)
    active = [i for i in warm.active if finite[i] and warm.beta[i] != 0]
    beta[active] = warm.beta[active]
    return beta, active


def _final_theta(prob: ColumnProblem, beta: np.ndarray, active: list) -> np.ndarray:
    theta = np.zeros(prob.p)
    grad = gradient(prob, beta)
    lam = prob.lam
    inactive = np.ones(prob.p, dtype=bool)
    inactive[active] = False
    scaled = inactive & np.isfinite(lam) & (lam > 0)
    theta[scaled] = np.clip(-grad[scaled] / lam[scaled], -1.0, 1.0)
    theta[active] = np.sign(beta[active])
    return theta


def solve_column(
    prob: ColumnProblem,
    warm: Optional[ActiveSetState] = None,
    tol: float = DEFAULT_TOL,
    max_iter: Optional[int] = None,
    on_step: Optional[Callable[[np.ndarray], None]] = None,
) -> ActiveSetState:
    """
    Solve one column problem, optionally warm-started from a previous state.

    A singular active block is handled by a move along its null space, so
    rank-deficient S (n < p) is solved from any start. on_step, when given,
    receives a copy of beta after every step.

    Raises:
        SingularActiveBlock: the objective is unbounded below or its minimiser
            is not unique along a null direction of the active block.
        NonConvergence: the iteration cap (50 p by default) was reached.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    p = prob.p
    lam = prob.lam
    finite = np.isfinite(lam)
    smooth = lam == 0
    cap = max_iter if max_iter is not None else ITERATIONS_PER_VARIABLE * max(p, 1)

    beta, active = _initial_state(prob, warm)
    theta = np.sign(beta)
    # coordinate added by the last optimality test, checked after its first step
    entering: Optional[int] = None
    # coordinates that vanished right after entering; skipped until progress is made
    stalled: Set[int] = set()

    for iteration in range(1, cap + 1):
        full_step = True
        if active:
            idx = np.array(active)
            S_AA = prob.S[np.ix_(idx, idx)]
            target = prob.v[idx] - lam[idx] * theta[idx]
            current = beta[idx]
            null = _null_space(S_AA)
            if null.shape[1]:
                full_step = False
                beta[idx], gamma = _degenerate_step(
                    current, theta[idx], S_AA @ current - target, null, ~smooth[idx]
                )
                logger.debug(
                    "Degenerate step gamma=%.3g along %d null direction(s) at iteration %d",
                    gamma,
                    null.shape[1],
                    iteration,
                )
            else:
                candidate = _solve_active_block(S_AA, target)
                beta[idx], full_step = _sign_consistent_step(
                    current, candidate, theta[idx], ~smooth[idx]
                )

            # deactivation scan
            vanished = np.abs(beta[idx]) < ZERO_THRESHOLD
            beta[idx[vanished]] = 0.0
            active = [i for i in active if beta[i] != 0]
            theta = np.zeros(p)
            theta[active] = np.sign(beta[active])
            if on_step is not None:
                on_step(beta.copy())

            if entering is not None:
                if beta[entering] == 0:
                    stalled.add(entering)
                else:
                    stalled.clear()
                entering = None

        if not full_step:
            continue

        # optimality test over the inactive coordinates
        grad = gradient(prob, beta)
        candidates = finite.copy()
        candidates[active] = False
        candidates[list(stalled)] = False
        violation = np.full(p, -np.inf)
        violation[candidates] = np.abs(grad[candidates]) - lam[candidates]
        worst = float(violation.max()) if p else -np.inf
        if worst <= tol:
            logger.debug("Column solved in %d iteration(s), |A|=%d", iteration, len(active))
            return ActiveSetState(
                beta=beta,
                active=tuple(active),
                theta=_final_theta(prob, beta, active),
                iterations=iteration,
            )
        # lowest index among the maximal violators
        entering = int(np.flatnonzero(violation == worst)[0])
        active.append(entering)
        theta[entering] = -np.sign(grad[entering])

    raise NonConvergence(f"no convergence after {cap} iterations")
