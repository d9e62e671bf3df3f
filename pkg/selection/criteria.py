"""
Information criteria for penalty selection.

Both criteria are maximised:

    BIC = n [Tr(V'A) - Tr(A'SA)/2] - log(n)/2 * df
    AIC = n [Tr(V'A) - Tr(A'SA)/2] - df

df is the number of nonzero coefficients. Constant likelihood terms are
omitted, so scores only compare estimates computed from the same moments.
"""

from enum import Enum
from typing import TYPE_CHECKING, Tuple

import numpy as np

from core.moments import EmpiricalMoments, likelihood_fit

if TYPE_CHECKING:
    from solver.network import NetworkEstimate


class Criterion(Enum):
    BIC = "bic"
    AIC = "aic"


def degrees_of_freedom(A: np.ndarray) -> int:
    return int(np.count_nonzero(A))


def information_criteria(m: EmpiricalMoments, A: np.ndarray) -> Tuple[int, float, float]:
    """Return (df, bic, aic) for a coefficient matrix."""
    df = degrees_of_freedom(A)
    fit = m.n * likelihood_fit(m, A)
    return df, fit - 0.5 * np.log(m.n) * df, fit - df


def bic(m: EmpiricalMoments, est: "NetworkEstimate") -> float:
    return information_criteria(m, est.A_hat)[1]


def aic(m: EmpiricalMoments, est: "NetworkEstimate") -> float:
    return information_criteria(m, est.A_hat)[2]


def score(est: "NetworkEstimate", criterion: Criterion) -> float:
    return est.bic if criterion is Criterion.BIC else est.aic
