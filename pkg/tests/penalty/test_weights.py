#!/usr/bin/env python3
"""
Test Suite for Penalty Weights Module
Tests the penalty matrices of the lasso, adaptive and class-based regimes
"""

import numpy as np
import pytest

from penalty.classes import ClassSource, NodeClassification
from penalty.weights import (
    PenaltyMatrix,
    PenaltyRegime,
    PenaltySpec,
    adaptive_individual_weights,
    build_penalty,
    class_weights,
)
from utils.errors import (
    DimensionMismatch,
    MissingClassification,
    MissingInit,
    NonPositiveRho,
    PenaltyError,
)


class TestPenaltyMatrices:
    """Test suite for building penalty matrices"""

    @pytest.fixture
    def classes(self) -> NodeClassification:
        """Two hubs among ten nodes"""
        mask = np.zeros(10, dtype=bool)
        mask[[1, 7]] = True
        return NodeClassification.from_hub_mask(mask)

    def test_lasso_is_uniform(self) -> None:
        """Test the lasso penalty is rho everywhere"""
        penalty = build_penalty(PenaltySpec(PenaltyRegime.LASSO, rho=0.3), 4)
        np.testing.assert_allclose(penalty.P, np.full((4, 4), 0.3))
        assert penalty.classes is None

    def test_adaptive_weights(self) -> None:
        """Test adaptive weights are max(1/|A0|, 1) and infinite on zeros"""
        init = np.array([[0.5, 0.0], [-3.0, 0.25]])
        expected = np.array([[2.0, np.inf], [1.0, 4.0]])
        np.testing.assert_array_equal(adaptive_individual_weights(init), expected)
        penalty = build_penalty(PenaltySpec(PenaltyRegime.ADAPTIVE, rho=0.5, init=init), 2)
        np.testing.assert_array_equal(penalty.P, 0.5 * expected)

    def test_known_classes_rows(self, classes: NodeClassification) -> None:
        """Test hub rows carry rho_hub and leaf rows rho_leaf"""
        spec = PenaltySpec(PenaltyRegime.KNOWN_CLASSES, rho=1.0, classes=classes)
        penalty = build_penalty(spec, 10)
        rho_hub, rho_leaf = class_weights(classes)
        np.testing.assert_allclose(penalty.P[1], rho_hub)
        np.testing.assert_allclose(penalty.P[0], rho_leaf)
        np.testing.assert_allclose(penalty.P[:, 0], penalty.P[:, 5])
        assert penalty.classes is classes

    def test_inferred_classes_use_initial_estimate(self) -> None:
        """Test the inferred regime penalizes strong rows less"""
        init = np.full((6, 6), 0.01) + np.diag(np.linspace(0.0, 0.05, 6))
        init[2] = 0.9
        init[4] = 0.8
        penalty = build_penalty(PenaltySpec(PenaltyRegime.INFERRED_CLASSES, init=init), 6)
        assert penalty.classes.source is ClassSource.INFERRED
        assert list(np.flatnonzero(penalty.classes.hub_mask)) == [2, 4]
        assert penalty.P[2, 0] < penalty.P[0, 0]

    @pytest.mark.parametrize("regime", list(PenaltyRegime))
    def test_scales_with_level(self, regime: PenaltyRegime, classes: NodeClassification) -> None:
        """Test multiplying rho by c multiplies every finite weight by c"""
        init = np.random.default_rng(2).uniform(-1.0, 1.0, size=(10, 10))
        init[init < -0.6] = 0.0
        init[[1, 7]] *= 4.0
        individual = np.ones((10, 10))
        individual[0, 3] = 0.0
        individual[5, 5] = 2.0
        spec = PenaltySpec(regime, rho=0.3, init=init, classes=classes, individual=individual)
        low = build_penalty(spec, 10).P
        high = build_penalty(spec.at_level(0.3 * 7.0), 10).P
        finite = np.isfinite(low)
        np.testing.assert_array_equal(np.isfinite(high), finite)
        np.testing.assert_allclose(high[finite], 7.0 * low[finite], rtol=1e-12)

    def test_individual_weights_multiply(self) -> None:
        """Test individual weights multiply entrywise and infinity wins over zero"""
        individual = np.array([[0.0, 2.0], [np.inf, 1.0]])
        init = np.array([[0.0, 1.0], [1.0, 1.0]])
        spec = PenaltySpec(PenaltyRegime.ADAPTIVE, rho=0.5, init=init, individual=individual)
        P = build_penalty(spec, 2).P
        assert P[0, 0] == np.inf
        assert P[0, 1] == pytest.approx(1.0)
        assert P[1, 0] == np.inf
        assert P[1, 1] == pytest.approx(0.5)

    def test_zero_individual_weight_frees_coefficient(self) -> None:
        """Test a zero individual weight removes the penalty on that entry"""
        individual = np.ones((3, 3))
        individual[0, 2] = 0.0
        P = build_penalty(PenaltySpec(PenaltyRegime.LASSO, individual=individual), 3).P
        assert P[0, 2] == 0.0
        assert P[1, 2] == 1.0

    def test_missing_inputs(self) -> None:
        """Test regimes refuse to build without their inputs"""
        with pytest.raises(MissingInit):
            build_penalty(PenaltySpec(PenaltyRegime.ADAPTIVE), 3)
        with pytest.raises(MissingInit):
            build_penalty(PenaltySpec(PenaltyRegime.INFERRED_CLASSES), 3)
        with pytest.raises(MissingClassification):
            build_penalty(PenaltySpec(PenaltyRegime.KNOWN_CLASSES), 3)

    def test_invalid_parameters(self, classes: NodeClassification) -> None:
        """Test nonpositive levels, small ratios and wrong shapes are refused"""
        with pytest.raises(NonPositiveRho):
            build_penalty(PenaltySpec(PenaltyRegime.LASSO, rho=0.0), 3)
        with pytest.raises(PenaltyError):
            PenaltySpec(PenaltyRegime.LASSO, ratio=1.0)
        with pytest.raises(PenaltyError):
            PenaltySpec(PenaltyRegime.LASSO, individual=-np.ones((2, 2)))
        with pytest.raises(DimensionMismatch):
            build_penalty(PenaltySpec(PenaltyRegime.KNOWN_CLASSES, classes=classes), 4)
        with pytest.raises(DimensionMismatch):
            build_penalty(PenaltySpec(PenaltyRegime.ADAPTIVE, init=np.ones((2, 3))), 2)

    def test_at_level(self) -> None:
        """Test at_level only changes the global level"""
        spec = PenaltySpec(PenaltyRegime.LASSO, ratio=3.0)
        moved = spec.at_level(0.2)
        assert moved.rho == 0.2 and moved.ratio == 3.0 and spec.rho == 1.0

    def test_scaled_keeps_infinity(self) -> None:
        """Test scaling a penalty matrix leaves infinite entries infinite"""
        matrix = PenaltyMatrix(P=np.array([[1.0, np.inf], [0.0, 2.0]]))
        scaled = matrix.scaled(0.5).P
        np.testing.assert_array_equal(scaled, [[0.5, np.inf], [0.0, 1.0]])
        with pytest.raises(NonPositiveRho):
            matrix.scaled(-1.0)


class TestClassWeights:
    """Test suite for hub and leaf weights"""

    def test_normalized_mean_is_one(self) -> None:
        """Test normalized row weights average to one"""
        classes = NodeClassification.from_hub_mask([True, True] + [False] * 8)
        rho_hub, rho_leaf = class_weights(classes, ratio=2.0)
        assert rho_hub == pytest.approx(10 / 18)
        assert rho_leaf == pytest.approx(2 * rho_hub)
        assert (2 * rho_hub + 8 * rho_leaf) / 10 == pytest.approx(1.0)

    def test_unnormalized(self) -> None:
        """Test rho_hub is one without normalization"""
        classes = NodeClassification.from_hub_mask([True, False, False])
        assert class_weights(classes, ratio=4.0, normalize=False) == (1.0, 4.0)

    def test_all_leaf(self) -> None:
        """Test an all-leaf classification gives weight one to every row"""
        classes = NodeClassification.all_leaf(5, ClassSource.INFERRED)
        rho_hub, rho_leaf = class_weights(classes, ratio=2.0)
        assert rho_leaf == pytest.approx(1.0)
        assert rho_hub == pytest.approx(0.5)
