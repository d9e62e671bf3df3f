#!/usr/bin/env python3
"""
Test Suite for Empirical Moments Module
Tests the moment matrices, the likelihood term and the unpenalized estimator
"""

import numpy as np
import pytest

from core.moments import EmpiricalMoments, empirical_moments, likelihood_fit, mle
from core.time_course import TimeCourseMatrix, default_names, standardize
from simulate.var_process import simulate_trajectory
from utils.errors import DimensionMismatch, NotStandardized, SingularCovariance


class TestEmpiricalMoments:
    """Test suite for S and V"""

    def test_moment_definitions(self, rng: np.random.Generator) -> None:
        """Test S and V match their lagged cross-product definitions"""
        X = standardize(rng.standard_normal((21, 3)))
        m = empirical_moments(X)
        past, future = X.values[:-1], X.values[1:]
        assert m.n == 20 and m.p == 3
        np.testing.assert_allclose(m.S, past.T @ past / 20, atol=1e-14)
        np.testing.assert_allclose(m.V, past.T @ future / 20, atol=1e-14)

    def test_S_exactly_symmetric(self, small_moments: EmpiricalMoments) -> None:
        """Test S is stored exactly symmetric"""
        assert np.array_equal(small_moments.S, small_moments.S.T)

    def test_requires_standardized_input(self) -> None:
        """Test raw matrices are refused"""
        X = TimeCourseMatrix(np.arange(6.0).reshape(3, 2), default_names(2))
        with pytest.raises(NotStandardized):
            empirical_moments(X)

    def test_shape_validation(self) -> None:
        """Test moment matrices must be p x p"""
        with pytest.raises(DimensionMismatch):
            EmpiricalMoments(S=np.eye(2), V=np.eye(3), n=10, p=2)

    def test_rank_at_most_transitions(self, rng: np.random.Generator) -> None:
        """Test S has p - n zero eigenvalues when there are fewer transitions than variables"""
        m = empirical_moments(standardize(rng.standard_normal((7, 15))))
        eigenvalues = np.linalg.eigvalsh(m.S)
        assert np.all(np.abs(eigenvalues[: 15 - 6]) <= 1e-8)
        assert eigenvalues[15 - 6] > 1e-8


class TestEstimator:
    """Test suite for the unpenalized estimator and the likelihood term"""

    def test_mle_matches_least_squares(self, rng: np.random.Generator) -> None:
        """Test S^-1 V equals the regression of X_t on X_{t-1}"""
        X = standardize(rng.standard_normal((41, 4)))
        m = empirical_moments(X)
        expected, *_ = np.linalg.lstsq(X.values[:-1], X.values[1:], rcond=None)
        np.testing.assert_allclose(mle(m), expected, atol=1e-10)

    def test_mle_maximizes_fit(
        self, rng: np.random.Generator, small_moments: EmpiricalMoments
    ) -> None:
        """Test the likelihood term is largest at the estimator"""
        A = mle(small_moments)
        best = likelihood_fit(small_moments, A)
        for _ in range(5):
            shifted = A + 0.05 * rng.standard_normal(A.shape)
            assert likelihood_fit(small_moments, shifted) < best

    def test_fit_of_null_model_is_zero(self, small_moments: EmpiricalMoments) -> None:
        """Test the empty network has zero likelihood term"""
        assert likelihood_fit(small_moments, np.zeros((5, 5))) == 0.0

    def test_singular_covariance(self, rng: np.random.Generator) -> None:
        """Test more variables than transitions makes S singular"""
        X = standardize(rng.standard_normal((6, 10)))
        with pytest.raises(SingularCovariance) as info:
            mle(empirical_moments(X))
        assert info.value.exit_code == 3

    def test_estimator_consistent(self) -> None:
        """Test the estimator approaches the true diagonal coefficients as n grows"""
        A = np.diag([0.8, -0.6, 0.5])
        errors = []
        for seed in range(5):
            raw = simulate_trajectory(A, 150, seed=seed)
            errors.append(np.abs(mle(empirical_moments(standardize(raw))) - A).mean())
        assert np.mean(errors) < 0.1
        raw = simulate_trajectory(A, 6000, seed=11)
        assert np.abs(mle(empirical_moments(standardize(raw))) - A).max() < 0.05
