"""
Empirical moments and the unpenalized estimator of the VAR(1) coefficients.

With X deprived of its last row (X_past) and of its first row (X_next):

    S = X_past' X_past / n        V = X_past' X_next / n

The log-likelihood of the process, up to constants, profiles to
Tr(V'A) - Tr(A'SA)/2, maximised by A = S^-1 V.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from core.time_course import TimeCourseMatrix
from utils.errors import DimensionMismatch, NotStandardized, SingularCovariance

DEFAULT_CONDITION_CAP = 1e12


@dataclass(frozen=True, eq=False)
class EmpiricalMoments:
    S: np.ndarray
    V: np.ndarray
    n: int
    p: int

    def __post_init__(self) -> None:
        for name in ("S", "V"):
            matrix = np.array(getattr(self, name), dtype=float)
            if matrix.shape != (self.p, self.p):
                raise DimensionMismatch(
                    f"{name} has shape {matrix.shape}, expected {(self.p, self.p)}"
                )
            matrix.setflags(write=False)
            object.__setattr__(self, name, matrix)


def empirical_moments(X: TimeCourseMatrix) -> EmpiricalMoments:
    if not X.standardized:
        raise NotStandardized()
    past = X.values[:-1]
    future = X.values[1:]
    n = X.n
    S = past.T @ past / n
    # exact symmetry, the product is symmetric only up to rounding
    S = 0.5 * (S + S.T)
    V = past.T @ future / n
    return EmpiricalMoments(S=S, V=V, n=n, p=X.p)


def likelihood_fit(m: EmpiricalMoments, A: np.ndarray) -> float:
    """Tr(V'A) - Tr(A'SA)/2, the data term of the profiled log-likelihood."""
    A = np.asarray(A, dtype=float)
    return float(np.sum(m.V * A) - 0.5 * np.sum(A * (m.S @ A)))


def mle(m: EmpiricalMoments, condition_cap: float = DEFAULT_CONDITION_CAP) -> np.ndarray:
    """Maximum-likelihood (equivalently least-squares) estimate S^-1 V."""
    condition = float(np.linalg.cond(m.S))
    if not np.isfinite(condition) or condition > condition_cap:
        raise SingularCovariance(condition, condition_cap)
    return linalg.solve(m.S, m.V, assume_a="pos")
