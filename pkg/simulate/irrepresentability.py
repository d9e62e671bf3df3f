"""
Irrepresentability audit of simulated instances.

For column k with true support I the condition holds when

    max | S[I^c, I] S[I, I]^-1 sign(A[I, k]) | <= 1

Columns with an empty support, or a full one, hold vacuously.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg

from core.moments import EmpiricalMoments
from utils.errors import DimensionMismatch, SingularSupportBlock

logger = logging.getLogger(__name__)

SUPPORT_CONDITION_CAP = 1e12


@dataclass(frozen=True)
class IrrepresentabilityReport:
    fraction_failing: float
    column_holds: Tuple[bool, ...]
    # max |w| per column, 0 for vacuous columns
    column_scores: Tuple[float, ...]

    @property
    def failing_columns(self) -> Tuple[int, ...]:
        return tuple(k for k, holds in enumerate(self.column_holds) if not holds)


def check_irrepresentability(m: EmpiricalMoments, A_true: np.ndarray) -> IrrepresentabilityReport:
    A_true = np.asarray(A_true, dtype=float)
    if A_true.shape != (m.p, m.p):
        raise DimensionMismatch(f"True matrix has shape {A_true.shape}, expected {(m.p, m.p)}")

    holds = []
    scores = []
    for k in range(m.p):
        support = np.flatnonzero(A_true[:, k])
        rest = np.flatnonzero(A_true[:, k] == 0)
        if support.size == 0 or rest.size == 0:
            holds.append(True)
            scores.append(0.0)
            continue
        S_II = m.S[np.ix_(support, support)]
        if np.linalg.cond(S_II) > SUPPORT_CONDITION_CAP:
            raise SingularSupportBlock(k)
        direction = linalg.solve(S_II, np.sign(A_true[support, k]), assume_a="sym")
        w = m.S[np.ix_(rest, support)] @ direction
        worst = float(np.abs(w).max())
        holds.append(worst <= 1.0)
        scores.append(worst)

    fraction = holds.count(False) / len(holds) if holds else 0.0
    logger.debug("Irrepresentability fails on %d/%d column(s)", holds.count(False), len(holds))
    return IrrepresentabilityReport(
        fraction_failing=fraction,
        column_holds=tuple(holds),
        column_scores=tuple(scores),
    )
