#!/usr/bin/env python3
"""
Test Suite for VAR(1) Trajectories
Tests the recursion, noise scaling and failure modes of the simulator
"""

import numpy as np
import pytest

from simulate.var_process import sample_var1, simulate_trajectory
from utils.errors import DimensionMismatch, DivergentTrajectory, SimulationError


class TestSimulateTrajectory:
    """Test suite for raw trajectories"""

    def test_shape_and_recursion(self) -> None:
        """Test a zero matrix gives pure noise with n+1 rows"""
        X = simulate_trajectory(np.zeros((3, 3)), 10, seed=4)
        assert X.shape == (11, 3)
        noise = np.sqrt(0.1) * np.random.default_rng(4).standard_normal((11, 3))
        np.testing.assert_allclose(X, noise)

    def test_follows_coefficients(self) -> None:
        """Test each row applies A to the previous one plus noise"""
        A = np.array([[0.5, 0.2], [0.0, -0.3]])
        X = simulate_trajectory(A, 5, seed=1)
        noise = np.sqrt(0.1) * np.random.default_rng(1).standard_normal((6, 2))
        np.testing.assert_allclose(X[1:] - X[:-1] @ A, noise[1:], atol=1e-12)

    def test_noise_scaling(self) -> None:
        """Test equal seeds give trajectories scaling with the noise deviation"""
        A = np.array([[0.4, 0.0], [0.3, 0.1]])
        small = simulate_trajectory(A, 20, sigma2=0.1, seed=3)
        large = simulate_trajectory(A, 20, sigma2=0.4, seed=3)
        np.testing.assert_allclose(large, 2.0 * small)

    def test_lag_one_correlation(self) -> None:
        """Test a scalar process with coefficient 0.5 has lag-one correlation 0.5"""
        X = simulate_trajectory(np.array([[0.5]]), 10_000, seed=6)
        correlation = np.corrcoef(X[:-1, 0], X[1:, 0])[0, 1]
        assert correlation == pytest.approx(0.5, abs=0.05)

    def test_divergence(self) -> None:
        """Test overflowing trajectories are reported"""
        with pytest.raises(DivergentTrajectory):
            simulate_trajectory(1e10 * np.eye(2), 200)

    def test_invalid_inputs(self) -> None:
        """Test invalid matrices and parameters are refused"""
        with pytest.raises(DimensionMismatch):
            simulate_trajectory(np.zeros((2, 3)), 5)
        with pytest.raises(SimulationError):
            simulate_trajectory(np.zeros((2, 2)), 0)
        with pytest.raises(SimulationError):
            simulate_trajectory(np.zeros((2, 2)), 5, sigma2=0.0)


class TestSampleVar1:
    """Test suite for standardized samples"""

    def test_standardized(self) -> None:
        """Test samples are standardized and named"""
        X = sample_var1(np.zeros((4, 4)), 30, seed=2, names=("a", "b", "c", "d"))
        assert X.standardized
        assert X.names == ("a", "b", "c", "d")
        np.testing.assert_allclose(X.values.mean(axis=0), 0.0, atol=1e-12)
