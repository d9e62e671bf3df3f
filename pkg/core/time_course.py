"""
Time-course observation matrices.

This module houses the (n+1) x p observation matrix X and its preparation:
- Validation of shape and time ordering
- Imputation of missing entries from the nearest observed time points
- Column centering and scaling to unit sample variance (divisor n)
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from utils.errors import (
    AllMissingColumn,
    ConstantColumn,
    DimensionMismatch,
    MissingValueWithImputeOff,
)

logger = logging.getLogger(__name__)

# Columns whose sample standard deviation falls below this are treated as constant.
CONSTANT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class TimeCourseMatrix:
    """Observation matrix; rows are consecutive time points t = 0..n."""

    values: np.ndarray
    names: Tuple[str, ...]
    standardized: bool = False

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.ndim != 2:
            raise DimensionMismatch(f"Expected a 2-D matrix, got {values.ndim} dimension(s)")
        if values.shape[0] < 2 or values.shape[1] < 1:
            raise DimensionMismatch(
                f"Need at least 2 time points and 1 variable, got shape {values.shape}"
            )
        if len(self.names) != values.shape[1]:
            raise DimensionMismatch(
                f"{len(self.names)} names supplied for {values.shape[1]} columns"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", tuple(str(name) for name in self.names))

    @property
    def n(self) -> int:
        """Number of transitions (time points minus one)."""
        return int(self.values.shape[0] - 1)

    @property
    def p(self) -> int:
        return int(self.values.shape[1])


def default_names(p: int) -> Tuple[str, ...]:
    return tuple(f"V{j + 1}" for j in range(p))


def impute_missing(values: np.ndarray, names: Sequence[str]) -> np.ndarray:
    """
    Fill missing entries column by column.

    Interior gaps take the mean of the nearest preceding and following observed
    values; leading or trailing gaps take the single nearest observed value.
    """
    filled = np.array(values, dtype=float)
    missing = np.isnan(filled)
    for j in np.flatnonzero(missing.any(axis=0)):
        column = filled[:, j]
        observed = np.flatnonzero(~missing[:, j])
        if observed.size == 0:
            raise AllMissingColumn(names[j])
        gaps = np.flatnonzero(missing[:, j])
        after = np.searchsorted(observed, gaps)
        before_idx = observed[np.clip(after - 1, 0, observed.size - 1)]
        after_idx = observed[np.clip(after, 0, observed.size - 1)]
        has_before = after > 0
        has_after = after < observed.size
        column[gaps] = np.where(
            has_before & has_after,
            0.5 * (column[before_idx] + column[after_idx]),
            np.where(has_before, column[before_idx], column[after_idx]),
        )
        logger.debug("Imputed %d value(s) in column %s", gaps.size, names[j])
    return filled


def standardize(
    raw: Union[np.ndarray, TimeCourseMatrix],
    impute: bool = False,
    names: Optional[Sequence[str]] = None,
) -> TimeCourseMatrix:
    """
    Center every column and scale it to unit sample variance.

    The variance divisor is n (number of transitions), matching the 1/n
    convention of the empirical moments. Missing entries are NaN.
    """
    if isinstance(raw, TimeCourseMatrix):
        names = raw.names if names is None else names
        values = np.array(raw.values, dtype=float)
    else:
        values = np.array(raw, dtype=float)
    if values.ndim != 2:
        raise DimensionMismatch(f"Expected a 2-D matrix, got {values.ndim} dimension(s)")
    if values.shape[0] < 2:
        raise DimensionMismatch("Need at least 2 time points to standardize")
    names = tuple(names) if names is not None else default_names(values.shape[1])
    if len(names) != values.shape[1]:
        raise DimensionMismatch(f"{len(names)} names supplied for {values.shape[1]} columns")

    missing = np.isnan(values)
    if missing.any():
        if not impute:
            row, col = np.argwhere(missing)[0]
            raise MissingValueWithImputeOff(int(row), int(col))
        values = impute_missing(values, names)

    mean = values.mean(axis=0)
    scale = values.std(axis=0, ddof=1)
    constant = np.flatnonzero(scale < CONSTANT_TOLERANCE)
    if constant.size:
        raise ConstantColumn(names[constant[0]])
    return TimeCourseMatrix((values - mean) / scale, names, standardized=True)
