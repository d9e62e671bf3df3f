#!/usr/bin/env python3
"""
Test Suite for Simulation Tools
Tests the simulate command and the files it writes
"""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from tools.simulation_tools import SimulationTools, replicate_dir, simulate_replicates
from utils.config import RunConfig, merge_overrides
from utils.formats import read_classes, read_edge_list, read_time_course
from utils.run_ledger import RunLedger


def simulate_config(output: Path, **simulation) -> RunConfig:
    settings = {"p": 8, "n": 15, "replicates": 2}
    settings.update(simulation)
    return merge_overrides(
        RunConfig(),
        {"command": "simulate", "output": str(output), "seed": 5, "simulation": settings},
    )


class TestSimulationTools:
    """Test suite for synthetic data generation"""

    @pytest.mark.asyncio
    async def test_writes_replicates(self, tmp_path: Path, ledger: RunLedger) -> None:
        """Test each replicate folder holds readable data, truth and classes"""
        output = tmp_path / "sim"
        result = await SimulationTools(output, ledger).simulate(simulate_config(output))
        assert result["success"], result
        assert result["replicates"] == 2
        assert (output / "instances.csv").exists()
        for replicate, edge_count in enumerate(result["edges"]):
            folder = output / replicate_dir(replicate)
            X = read_time_course(folder / "data.csv")
            assert (X.n, X.p) == (15, 8)
            truth = read_edge_list(folder / "truth.tsv")
            assert len(truth) == edge_count == 16
            classes = read_classes(folder / "classes.tsv", X.names)
            assert set(truth["source"]) <= {
                name for name, hub in zip(X.names, classes.hub_mask) if hub
            }

    @pytest.mark.asyncio
    async def test_data_written_exactly(self, tmp_path: Path, ledger: RunLedger) -> None:
        """Test the written trajectory equals the simulated one"""
        output = tmp_path / "sim"
        config = simulate_config(output, replicates=1)
        await SimulationTools(output, ledger).simulate(config)
        expected = simulate_replicates(config)[0].raw
        X = read_time_course(output / replicate_dir(0) / "data.csv")
        np.testing.assert_array_equal(X.values, expected)

    @pytest.mark.asyncio
    async def test_instances_report_spectral_radius(
        self, tmp_path: Path, ledger: RunLedger
    ) -> None:
        """Test the instance table lists a radius below one for stationary draws"""
        output = tmp_path / "sim"
        config = simulate_config(output, p=20, n=10, replicates=4)
        result = await SimulationTools(output, ledger).simulate(config)
        assert result["success"], result
        table = pd.read_csv(output / "instances.csv")
        assert list(table.columns) == ["replicate", "p", "n", "edges", "hubs", "spectral_radius"]
        assert (table["spectral_radius"] < 1.0).all()

    @pytest.mark.asyncio
    async def test_infeasible_edges(self, tmp_path: Path, ledger: RunLedger) -> None:
        """Test an impossible edge count fails with the simulation exit code"""
        output = tmp_path / "sim"
        config = simulate_config(output, p=3, edges=20)
        result = await SimulationTools(output, ledger).simulate(config)
        assert not result["success"]
        assert result["exit_code"] == 8
        assert result["error_type"] == "InfeasibleEdgeCount"

    def test_replicate_dir(self) -> None:
        """Test replicate folders are zero padded"""
        assert replicate_dir(7) == "replicate_007"
