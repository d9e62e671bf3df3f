"""
Complete simulated instances.

Each instance owns one seed sequence, spawned into independent streams for the
graph, the coefficients and the trajectory, so replicates never share draws.
"""

from dataclasses import dataclass
from typing import FrozenSet, Optional, Tuple

import numpy as np

from core.time_course import TimeCourseMatrix, default_names, standardize
from penalty.classes import NodeClassification
from simulate.graphs import (
    DEFAULT_HUB_PROB,
    DEFAULT_HUB_TO_LEAF,
    Edge,
    sample_coefficients,
    sample_hub_graph,
)
from simulate.var_process import DEFAULT_SIGMA2, simulate_trajectory


@dataclass(frozen=True, eq=False)
class SimulatedInstance:
    A_true: np.ndarray
    edges: FrozenSet[Edge]
    classes: NodeClassification
    X: TimeCourseMatrix
    seed: int
    keys: Tuple[int, ...] = ()
    raw: Optional[np.ndarray] = None

    @property
    def p(self) -> int:
        return int(self.A_true.shape[0])

    @property
    def names(self) -> Tuple[str, ...]:
        return self.X.names


def replicate_seed(master: int, *keys: int) -> np.random.SeedSequence:
    """Independent stream for (master, keys...), e.g. (seed, setting, replicate)."""
    return np.random.SeedSequence([int(master), *(int(key) for key in keys)])


def simulate_instance(
    p: int,
    n: int,
    K: Optional[int] = None,
    hub_prob: float = DEFAULT_HUB_PROB,
    hub_to_leaf: float = DEFAULT_HUB_TO_LEAF,
    sigma2: float = DEFAULT_SIGMA2,
    seed: int = 0,
    keys: Tuple[int, ...] = (),
    stationary: bool = True,
) -> SimulatedInstance:
    """
    One hub graph, its coefficients and a trajectory of n + 1 time points.

    Coefficient draws are repeated until the process is stationary unless
    stationary is False.
    """
    graph_seed, coefficient_seed, data_seed = replicate_seed(seed, *keys).spawn(3)
    edges, classes = sample_hub_graph(p, K, hub_prob, hub_to_leaf, seed=graph_seed)
    A_true = sample_coefficients(edges, p, seed=coefficient_seed, stationary=stationary)
    raw = simulate_trajectory(A_true, n, sigma2, seed=data_seed)
    return SimulatedInstance(
        A_true=A_true,
        edges=edges,
        classes=classes,
        X=standardize(raw, names=default_names(p)),
        seed=int(seed),
        keys=tuple(int(key) for key in keys),
        raw=raw,
    )
