"""
Edge-recovery metrics against a gold-standard network.

An estimated edge is a nonzero entry (exact zero test); signs are not
evaluated. Counting covers all p^2 ordered pairs, self-loops included, unless
the diagonal is excluded explicitly. Rates whose denominator vanishes are
undefined (None) rather than zero.
"""

from dataclasses import asdict, dataclass
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from utils.errors import DimensionMismatch

RATE_NAMES = ("precision", "recall", "fallout")
DEFAULT_GROUP_KEYS = ("setting", "method")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class Rates:
    precision: Optional[float]
    recall: Optional[float]
    fallout: Optional[float]

    def as_dict(self) -> dict:
        return asdict(self)


def truth_mask(truth_edges: Iterable[Tuple[int, int]], p: int) -> np.ndarray:
    mask = np.zeros((p, p), dtype=bool)
    for source, target in truth_edges:
        if not (0 <= source < p and 0 <= target < p):
            raise DimensionMismatch(f"Edge ({source}, {target}) outside a {p}-node network")
        mask[source, target] = True
    return mask


def confusion(
    A_hat: np.ndarray,
    truth_edges: Iterable[Tuple[int, int]],
    include_diagonal: bool = True,
) -> ConfusionCounts:
    A_hat = np.asarray(A_hat)
    if A_hat.ndim != 2 or A_hat.shape[0] != A_hat.shape[1]:
        raise DimensionMismatch(f"Estimate must be square, got shape {A_hat.shape}")
    p = A_hat.shape[0]
    predicted = A_hat != 0
    actual = truth_mask(truth_edges, p)
    counted = np.ones((p, p), dtype=bool)
    if not include_diagonal:
        np.fill_diagonal(counted, False)
    return ConfusionCounts(
        tp=int(np.sum(predicted & actual & counted)),
        fp=int(np.sum(predicted & ~actual & counted)),
        tn=int(np.sum(~predicted & ~actual & counted)),
        fn=int(np.sum(~predicted & actual & counted)),
    )


def _ratio(numerator: int, denominator: int) -> Optional[float]:
    return numerator / denominator if denominator > 0 else None


def rates(c: ConfusionCounts) -> Rates:
    return Rates(
        precision=_ratio(c.tp, c.tp + c.fp),
        recall=_ratio(c.tp, c.tp + c.fn),
        fallout=_ratio(c.fp, c.fp + c.tn),
    )


def summarize_rates(
    rows: Union[pd.DataFrame, Iterable[Mapping]],
    by: Sequence[str] = DEFAULT_GROUP_KEYS,
) -> pd.DataFrame:
    """
    Aggregate per-replicate rates into mean, standard error and defined count.

    Each rate is averaged over the replicates where it is defined, so a
    replicate selecting no edge does not contribute to the precision mean.
    """
    frame = rows.copy() if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows))
    keys = [key for key in by if key in frame.columns]
    for rate in RATE_NAMES:
        if rate not in frame.columns:
            frame[rate] = np.nan
        frame[rate] = pd.to_numeric(frame[rate], errors="coerce")

    if frame.empty:
        columns = keys + ["replicates"]
        columns += [f"{rate}_{stat}" for rate in RATE_NAMES for stat in ("mean", "se", "defined")]
        return pd.DataFrame(columns=columns)

    grouped = frame.groupby(keys, sort=True, dropna=False) if keys else frame.groupby(
        lambda _: 0
    )
    summary = grouped.size().rename("replicates").to_frame()
    for rate in RATE_NAMES:
        stats = grouped[rate].agg(["mean", "sem", "count"])
        summary[f"{rate}_mean"] = stats["mean"]
        summary[f"{rate}_se"] = stats["sem"]
        summary[f"{rate}_defined"] = stats["count"].astype(int)
    return summary.reset_index(drop=not keys)
