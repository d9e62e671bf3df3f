"""
Comparison of an inferred edge list against a gold standard.

The node universe comes from a data file or a name list when given, otherwise
from the names occurring in the two edge lists.
"""

import asyncio
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from evaluation.metrics import confusion, rates
from tools.artifacts import ArtifactWriter, failure_result
from utils.config import RunConfig
from utils.errors import ConfigError, DataFormatError
from utils.formats import (
    edge_names,
    edges_to_indices,
    edges_to_matrix,
    read_edge_list,
    read_time_course,
    render_table,
)
from utils.run_ledger import RunLedger

logger = logging.getLogger(__name__)


def read_node_universe(path: str) -> List[str]:
    """Variable names of a data file, or of a plain list with one name per line."""
    try:
        return list(read_time_course(path).names)
    except DataFormatError:
        with open(path, "r", encoding="utf-8") as handle:
            names = [line.strip() for line in handle if line.strip()]
        if not names:
            raise
        if len(set(names)) != len(names):
            raise DataFormatError(path, None, "duplicate names in node list")
        return names


def _union(*lists: Sequence[str]) -> List[str]:
    seen: Dict[str, None] = {}
    for names in lists:
        for name in names:
            seen.setdefault(name, None)
    return list(seen)


def evaluate_files(config: RunConfig) -> Dict[str, Any]:
    settings = config.eval
    if not settings.estimate or not settings.truth:
        raise ConfigError("eval requires an estimate edge list and a truth edge list")
    estimate = read_edge_list(settings.estimate)
    truth = read_edge_list(settings.truth)
    if settings.nodes:
        names = read_node_universe(settings.nodes)
    else:
        names = _union(edge_names(truth), edge_names(estimate))

    A_hat = edges_to_matrix(estimate, names, settings.estimate)
    truth_edges = edges_to_indices(truth, names, settings.truth)
    counts = confusion(A_hat, truth_edges, include_diagonal=not settings.off_diagonal)
    metrics = rates(counts)
    logger.info(
        "Evaluated %d estimated against %d true edge(s) over %d node(s)",
        int((A_hat != 0).sum()),
        len(truth_edges),
        len(names),
    )
    return {
        "nodes": len(names),
        "tp": counts.tp,
        "fp": counts.fp,
        "tn": counts.tn,
        "fn": counts.fn,
        **metrics.as_dict(),
    }


class EvaluationTools:
    """Tools for scoring inferred networks."""

    def __init__(self, output_dir: Path, ledger: RunLedger):
        """Initialize evaluation tools with the output directory and run ledger."""
        self.output_dir = output_dir
        self.ledger = ledger

    async def evaluate(self, config: RunConfig, run_id: Optional[int] = None) -> Dict[str, Any]:
        """Compute confusion counts and rates; writes metrics.csv."""
        try:
            row = await asyncio.to_thread(evaluate_files, config)
            writer = ArtifactWriter(self.output_dir, self.ledger, run_id)
            table = pd.DataFrame([row])
            await writer.write("metrics.csv", render_table(table))
            await writer.write("run_config.json", config.to_json())
            return {"success": True, "exit_code": 0, "metrics": row, "artifacts": writer.written}
        except Exception as e:  # pylint: disable=broad-except
            return failure_result(e)
