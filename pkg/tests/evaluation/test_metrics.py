#!/usr/bin/env python3
"""
Test Suite for Edge-Recovery Metrics
Tests confusion counts, rates and their aggregation over replicates
"""

import numpy as np
import pandas as pd
import pytest

from evaluation.metrics import ConfusionCounts, confusion, rates, summarize_rates, truth_mask
from utils.errors import DimensionMismatch


class TestConfusion:
    """Test suite for confusion counts"""

    def test_counts(self) -> None:
        """Test counts over all ordered pairs with self-loops"""
        A_hat = np.array([[0.3, -0.1, 0.0], [0.0, 0.0, 0.0], [0.0, 2.0, 0.0]])
        truth = {(0, 0), (1, 2), (2, 1)}
        counts = confusion(A_hat, truth)
        assert counts == ConfusionCounts(tp=2, fp=1, tn=5, fn=1)
        assert counts.total == 9

    def test_off_diagonal(self) -> None:
        """Test excluding the diagonal drops self-loops from every count"""
        A_hat = np.array([[0.3, 0.0], [0.0, 0.0]])
        counts = confusion(A_hat, {(0, 0), (0, 1)}, include_diagonal=False)
        assert counts == ConfusionCounts(tp=0, fp=0, tn=1, fn=1)

    def test_signs_ignored(self) -> None:
        """Test a negative estimate on a true edge counts as a hit"""
        assert confusion(np.array([[-1.0]]), {(0, 0)}).tp == 1

    def test_swapping_roles_swaps_errors(self) -> None:
        """Test exchanging estimate and truth exchanges false positives and false negatives"""
        rng = np.random.default_rng(8)
        first = rng.random((6, 6)) < 0.3
        second = rng.random((6, 6)) < 0.3
        forward = confusion(first.astype(float), set(zip(*np.nonzero(second))))
        backward = confusion(second.astype(float), set(zip(*np.nonzero(first))))
        assert (forward.tp, forward.tn) == (backward.tp, backward.tn)
        assert (forward.fp, forward.fn) == (backward.fn, backward.fp)

    def test_invalid_inputs(self) -> None:
        """Test non-square estimates and out-of-range edges are refused"""
        with pytest.raises(DimensionMismatch):
            confusion(np.zeros((2, 3)), set())
        with pytest.raises(DimensionMismatch):
            truth_mask({(0, 5)}, 3)


class TestRates:
    """Test suite for precision, recall and fallout"""

    def test_values(self) -> None:
        """Test rates from counts"""
        result = rates(ConfusionCounts(tp=2, fp=1, tn=5, fn=1))
        assert result.precision == pytest.approx(2 / 3)
        assert result.recall == pytest.approx(2 / 3)
        assert result.fallout == pytest.approx(1 / 6)

    def test_undefined_rates(self) -> None:
        """Test rates with a zero denominator are None"""
        result = rates(ConfusionCounts(tp=0, fp=0, tn=4, fn=0))
        assert result.precision is None
        assert result.recall is None
        assert result.fallout == 0.0
        assert result.as_dict() == {"precision": None, "recall": None, "fallout": 0.0}


class TestSummarizeRates:
    """Test suite for replicate aggregation"""

    def test_mean_over_defined(self) -> None:
        """Test undefined rates are left out of means and counted separately"""
        rows = [
            {"setting": "s", "method": "lasso", "precision": 0.5, "recall": 1.0, "fallout": 0.1},
            {"setting": "s", "method": "lasso", "precision": None, "recall": 0.5, "fallout": 0.0},
            {"setting": "s", "method": "lasso", "precision": 1.0, "recall": 0.0, "fallout": 0.2},
        ]
        summary = summarize_rates(rows)
        assert len(summary) == 1
        row = summary.iloc[0]
        assert row["replicates"] == 3
        assert row["precision_mean"] == pytest.approx(0.75)
        assert row["precision_defined"] == 2
        assert row["recall_mean"] == pytest.approx(0.5)
        assert row["recall_se"] == pytest.approx(0.5 / np.sqrt(3))

    def test_groups(self) -> None:
        """Test one summary row per setting and method"""
        frame = pd.DataFrame(
            {
                "setting": ["a", "a", "b", "b"],
                "method": ["lasso", "known", "lasso", "lasso"],
                "precision": [1.0, 0.5, 0.25, 0.75],
                "recall": [1.0, 1.0, 1.0, 1.0],
                "fallout": [0.0, 0.0, 0.0, 0.0],
            }
        )
        summary = summarize_rates(frame)
        assert list(zip(summary["setting"], summary["method"])) == [
            ("a", "known"),
            ("a", "lasso"),
            ("b", "lasso"),
        ]
        assert summary.iloc[2]["precision_mean"] == pytest.approx(0.5)

    def test_empty(self) -> None:
        """Test an empty input yields an empty table with every column"""
        summary = summarize_rates([])
        assert summary.empty
        assert "precision_mean" in summary.columns
        assert "fallout_defined" in summary.columns
