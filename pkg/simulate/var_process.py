"""
Gaussian VAR(1) trajectories.

X_0 ~ N(0, sigma2 I) and X_t = X_{t-1} A + eps_t with eps_t ~ N(0, sigma2 I).
A is used as given; stationary draws are the business of the coefficient sampler.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from core.time_course import TimeCourseMatrix, default_names, standardize
from simulate.graphs import SeedLike
from utils.errors import DimensionMismatch, DivergentTrajectory, SimulationError

logger = logging.getLogger(__name__)

DEFAULT_SIGMA2 = 0.1


def simulate_trajectory(
    A: np.ndarray, n: int, sigma2: float = DEFAULT_SIGMA2, seed: SeedLike = 0
) -> np.ndarray:
    """
    Raw (n+1) x p trajectory.

    The same seed yields the same standard normal draws for every sigma2, so
    trajectories scale with sqrt(sigma2).
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"Coefficient matrix must be square, got shape {A.shape}")
    if n < 1:
        raise SimulationError(f"Need at least one transition, got n={n}")
    if not sigma2 > 0:
        raise SimulationError(f"Noise variance must be positive, got {sigma2}")

    rng = np.random.default_rng(seed)
    noise = np.sqrt(sigma2) * rng.standard_normal((n + 1, A.shape[0]))
    X = np.empty_like(noise)
    X[0] = noise[0]
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(1, n + 1):
            X[t] = X[t - 1] @ A + noise[t]
    if not np.all(np.isfinite(X)):
        raise DivergentTrajectory()
    return X


def sample_var1(
    A: np.ndarray,
    n: int,
    sigma2: float = DEFAULT_SIGMA2,
    seed: SeedLike = 0,
    names: Optional[Sequence[str]] = None,
) -> TimeCourseMatrix:
    """Simulated trajectory, standardized as the inference pipeline expects."""
    raw = simulate_trajectory(A, n, sigma2, seed)
    names = tuple(names) if names is not None else default_names(raw.shape[1])
    logger.debug("Simulated %d x %d trajectory", *raw.shape)
    return standardize(raw, names=names)
