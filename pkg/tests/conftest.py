#!/usr/bin/env python3
"""
Shared test configuration and fixtures for all test modules
"""

from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from core.moments import EmpiricalMoments, empirical_moments
from core.time_course import standardize
from simulate.instances import SimulatedInstance, simulate_instance
from solver.active_set import ColumnProblem
from utils.run_ledger import RunLedger


def coordinate_descent(
    S: np.ndarray, v: np.ndarray, lam: np.ndarray, tol: float = 1e-14, max_sweeps: int = 200_000
) -> np.ndarray:
    """Cyclic coordinate descent oracle for 1/2 b'Sb - b'v + sum lam_i |b_i|."""
    p = v.size
    beta = np.zeros(p)
    for _ in range(max_sweeps):
        largest_move = 0.0
        for i in range(p):
            if np.isinf(lam[i]):
                continue
            partial = v[i] - S[i] @ beta + S[i, i] * beta[i]
            updated = np.sign(partial) * max(abs(partial) - lam[i], 0.0) / S[i, i]
            largest_move = max(largest_move, abs(updated - beta[i]))
            beta[i] = updated
        if largest_move < tol:
            break
    return beta


def random_moments(rng: np.random.Generator, p: int, n: int) -> EmpiricalMoments:
    """Moments of standardized Gaussian data with n transitions."""
    return empirical_moments(standardize(rng.standard_normal((n + 1, p))))


def random_problem(rng: np.random.Generator, p: int, n: int = 40) -> ColumnProblem:
    m = random_moments(rng, p, n)
    lam = rng.uniform(0.0, 0.3, size=p)
    return ColumnProblem(S=m.S, v=m.V[:, 0], lam=lam)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for reproducible random instances"""
    return np.random.default_rng(20240601)


@pytest.fixture
def small_moments(rng: np.random.Generator) -> EmpiricalMoments:
    """Moments of a 5-variable, 40-transition random data set"""
    return random_moments(rng, 5, 40)


@pytest.fixture
def cd_oracle() -> Callable[..., np.ndarray]:
    """Coordinate-descent reference solver"""
    return coordinate_descent


@pytest.fixture
def hub_instance() -> SimulatedInstance:
    """Simulated hub network with p=20, n=40"""
    return simulate_instance(20, 40, seed=7)


@pytest.fixture
def ledger(tmp_path: Path):
    """Run ledger writing to a temporary SQLite file"""
    manager = RunLedger(level="WARNING", ledger_path=tmp_path / "ledger.db")
    yield manager
    manager.close()


@pytest.fixture
def data_file(tmp_path: Path, hub_instance: SimulatedInstance) -> Path:
    """Raw simulated time course written as a comma-delimited file"""
    path = tmp_path / "data.csv"
    header = ",".join(hub_instance.names)
    rows = [",".join(f"{value:.17g}" for value in row) for row in hub_instance.raw]
    path.write_text("\n".join([header, *rows]) + "\n", encoding="utf-8")
    return path
