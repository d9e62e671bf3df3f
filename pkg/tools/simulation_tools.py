"""
Synthetic data generation.

The simulate command writes one directory per replicate with the raw
trajectory (data.csv), the true network (truth.tsv) and the planted classes
(classes.tsv), readable by the infer and eval commands.
"""

import asyncio
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from core.time_course import TimeCourseMatrix
from simulate.graphs import spectral_radius
from simulate.instances import SimulatedInstance, simulate_instance
from tools.artifacts import ArtifactWriter, failure_result
from utils.config import RunConfig
from utils.formats import render_classes, render_edge_list, render_table, render_time_course
from utils.run_ledger import RunLedger


def replicate_dir(replicate: int) -> str:
    return f"replicate_{replicate:03d}"


def simulate_replicates(config: RunConfig) -> List[SimulatedInstance]:
    settings = config.simulation
    return [
        simulate_instance(
            settings.p,
            settings.n,
            K=settings.edges,
            hub_prob=settings.hub_prob,
            hub_to_leaf=settings.hub_to_leaf,
            sigma2=settings.sigma2,
            stationary=settings.stationary,
            seed=config.seed,
            keys=(replicate,),
        )
        for replicate in range(settings.replicates)
    ]


class SimulationTools:
    """Tools for generating hub-structured VAR(1) data sets."""

    def __init__(self, output_dir: Path, ledger: RunLedger):
        """Initialize simulation tools with the output directory and run ledger."""
        self.output_dir = output_dir
        self.ledger = ledger

    async def simulate(self, config: RunConfig, run_id: Optional[int] = None) -> Dict[str, Any]:
        """Simulate the configured replicates and write their files."""
        try:
            instances = await asyncio.to_thread(simulate_replicates, config)
            writer = ArtifactWriter(self.output_dir, self.ledger, run_id)
            rows = []
            for replicate, instance in enumerate(instances):
                folder = replicate_dir(replicate)
                raw = TimeCourseMatrix(instance.raw, instance.names)
                await writer.write(f"{folder}/data.csv", render_time_course(raw))
                await writer.write(
                    f"{folder}/truth.tsv", render_edge_list(instance.A_true, instance.names)
                )
                await writer.write(
                    f"{folder}/classes.tsv", render_classes(instance.classes, instance.names)
                )
                rows.append(
                    {
                        "replicate": replicate,
                        "p": instance.p,
                        "n": config.simulation.n,
                        "edges": len(instance.edges),
                        "hubs": instance.classes.hub_count,
                        "spectral_radius": spectral_radius(instance.A_true),
                    }
                )
            await writer.write("instances.csv", render_table(pd.DataFrame(rows)))
            await writer.write("run_config.json", config.to_json())
            return {
                "success": True,
                "exit_code": 0,
                "replicates": len(instances),
                "edges": [row["edges"] for row in rows],
                "artifacts": writer.written,
            }
        except Exception as e:  # pylint: disable=broad-except
            return failure_result(e)
