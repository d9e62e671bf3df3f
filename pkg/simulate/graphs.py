"""
Hub-structured random graphs and their VAR(1) coefficients.

Nodes are hubs with probability hub_prob. Only hubs emit edges: each of the K
edges is hub->leaf with probability hub_to_leaf, hub->hub otherwise (self-loops
included), with uniform endpoints inside its type. Duplicate pairs are rejected
and redrawn. Coefficients can be restricted to stationary draws.
"""

import logging
from typing import FrozenSet, Optional, Tuple, Union

import numpy as np

from penalty.classes import ClassSource, NodeClassification
from utils.errors import InfeasibleEdgeCount, SimulationError, UnstableCoefficients

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]
Edge = Tuple[int, int]

DEFAULT_HUB_PROB = 0.1
DEFAULT_HUB_TO_LEAF = 0.85
MIN_MAGNITUDE = 0.2
MAX_MAGNITUDE = 1.0
MAX_CLASS_DRAWS = 1000
MAX_COEFFICIENT_DRAWS = 1000


def default_edge_count(p: int) -> int:
    return 2 * p


def placeable_pairs(hubs: int, p: int) -> int:
    """Hub->leaf plus hub->hub pairs: h (p - h) + h^2 = h p."""
    return hubs * (p - hubs) + hubs * hubs


def _draw_hub_mask(p: int, edges: int, hub_prob: float, rng: np.random.Generator) -> np.ndarray:
    best = 0
    for _ in range(MAX_CLASS_DRAWS):
        mask = rng.random(p) < hub_prob
        hubs = int(mask.sum())
        capacity = placeable_pairs(hubs, p)
        if hubs > 0 and capacity >= edges:
            return mask
        best = max(best, capacity)
    raise InfeasibleEdgeCount(edges, best)


def sample_hub_graph(
    p: int,
    K: Optional[int] = None,
    hub_prob: float = DEFAULT_HUB_PROB,
    hub_to_leaf: float = DEFAULT_HUB_TO_LEAF,
    seed: SeedLike = 0,
) -> Tuple[FrozenSet[Edge], NodeClassification]:
    """
    Draw node classes and K distinct directed edges (source row, target column).

    Class draws are repeated while there is no hub or fewer than K placeable
    pairs. An edge type whose pairs are exhausted is redrawn.

    Raises:
        InfeasibleEdgeCount: K exceeds p^2, or no acceptable class draw was found
    """
    if p < 1:
        raise SimulationError(f"Need at least one node, got {p}")
    if not 0 < hub_prob < 1:
        raise SimulationError(f"Hub probability must lie in (0, 1), got {hub_prob}")
    if not 0 <= hub_to_leaf <= 1:
        raise SimulationError(f"Hub-to-leaf fraction must lie in [0, 1], got {hub_to_leaf}")
    edges_wanted = default_edge_count(p) if K is None else int(K)
    if edges_wanted < 0:
        raise SimulationError(f"Edge count must be nonnegative, got {edges_wanted}")
    if edges_wanted > p * p:
        raise InfeasibleEdgeCount(edges_wanted, p * p)

    rng = np.random.default_rng(seed)
    mask = _draw_hub_mask(p, edges_wanted, hub_prob, rng)
    hubs = np.flatnonzero(mask)
    leaves = np.flatnonzero(~mask)
    capacity = {True: hubs.size * leaves.size, False: hubs.size * hubs.size}
    placed = {True: 0, False: 0}

    edges = set()
    while len(edges) < edges_wanted:
        to_leaf = bool(rng.random() < hub_to_leaf)
        if placed[to_leaf] >= capacity[to_leaf]:
            to_leaf = not to_leaf
        targets = leaves if to_leaf else hubs
        edge = (int(hubs[rng.integers(hubs.size)]), int(targets[rng.integers(targets.size)]))
        if edge in edges:
            continue
        edges.add(edge)
        placed[to_leaf] += 1

    logger.debug(
        "Sampled %d edge(s) on %d hub(s): %d hub->leaf, %d hub->hub",
        len(edges),
        hubs.size,
        placed[True],
        placed[False],
    )
    return frozenset(edges), NodeClassification.from_hub_mask(mask, ClassSource.KNOWN)


def spectral_radius(A: np.ndarray) -> float:
    """Largest eigenvalue modulus; only rows emitting edges contribute."""
    A = np.asarray(A, dtype=float)
    sources = np.flatnonzero(np.any(A != 0, axis=1))
    if sources.size == 0:
        return 0.0
    block = A[np.ix_(sources, sources)]
    return float(np.max(np.abs(np.linalg.eigvals(block))))


def sample_coefficients(
    edges,
    p: int,
    seed: SeedLike = 0,
    stationary: bool = False,
    max_draws: int = MAX_COEFFICIENT_DRAWS,
) -> np.ndarray:
    """
    Coefficients uniform on [-1, -0.2] U [0.2, 1] on the edges, zero elsewhere.

    With stationary set, whole draws are repeated until the spectral radius is
    below 1, so the process has a stationary distribution.

    Raises:
        UnstableCoefficients: no stationary draw within max_draws attempts
    """
    rng = np.random.default_rng(seed)
    A = np.zeros((p, p))
    ordered = sorted(edges)
    if not ordered:
        return A
    rows, cols = np.array(ordered).T
    smallest = np.inf
    for draw in range(1, max_draws + 1):
        magnitude = rng.uniform(MIN_MAGNITUDE, MAX_MAGNITUDE, size=len(ordered))
        sign = rng.choice(np.array([-1.0, 1.0]), size=len(ordered))
        A[rows, cols] = sign * magnitude
        if not stationary:
            return A
        radius = spectral_radius(A)
        if radius < 1.0:
            logger.debug("Stationary coefficients after %d draw(s), radius %.3g", draw, radius)
            return A
        smallest = min(smallest, radius)
    raise UnstableCoefficients(max_draws, smallest)
