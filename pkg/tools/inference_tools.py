"""
Network inference from a time-course data file.

This module provides the infer command:
- Reading, imputing and standardizing the data
- Fitting one penalty regime (initial Lasso, classes or adaptive weights, path, selection)
- Writing the edge list, dense adjacency, path table, classes, DOT graph and run summary
"""

import asyncio
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from core.moments import EmpiricalMoments, empirical_moments
from core.time_course import TimeCourseMatrix, standardize
from penalty.classes import NodeClassification
from penalty.weights import PenaltyRegime
from selection.criteria import Criterion
from selection.pipeline import PathSettings, RegimeFit, fit_regime
from tools.artifacts import ArtifactWriter, failure_result
from utils.config import RunConfig
from utils.errors import ConfigError, DataFormatError, MissingClassification
from utils.formats import (
    path_frame,
    read_adjacency,
    read_classes,
    read_time_course,
    render_adjacency,
    render_classes,
    render_dot,
    render_edge_list,
    render_summary,
    render_table,
)
from utils.run_ledger import RunLedger

logger = logging.getLogger(__name__)


def path_settings(config: RunConfig, workers: Optional[int] = None) -> PathSettings:
    return PathSettings(
        grid_size=config.grid_size,
        terminal_ratio=config.terminal_ratio,
        tol=config.tol,
        workers=workers,
    )


def _load_inputs(
    config: RunConfig,
) -> Tuple[TimeCourseMatrix, EmpiricalMoments, Optional[NodeClassification], Optional[np.ndarray]]:
    if not config.input:
        raise ConfigError("infer requires a data file")
    X = standardize(read_time_course(config.input), impute=config.impute)
    m = empirical_moments(X)

    classes = None
    if config.penalty == "known":
        if not config.classes:
            raise MissingClassification()
        classes = read_classes(config.classes, X.names)
    elif config.classes:
        logger.warning("Classes file ignored for the %s regime", config.penalty)

    individual = None
    if config.individual:
        individual, names = read_adjacency(config.individual)
        if names != X.names:
            raise DataFormatError(
                config.individual, 1, "individual weight names differ from the data columns"
            )
    return X, m, classes, individual


def run_inference(config: RunConfig) -> Tuple[TimeCourseMatrix, EmpiricalMoments, RegimeFit]:
    """Synchronous inference pipeline for one configuration."""
    X, m, classes, individual = _load_inputs(config)
    fit = fit_regime(
        m,
        PenaltyRegime(config.penalty),
        criterion=Criterion(config.criterion),
        init_criterion=Criterion(config.init_criterion),
        classes=classes,
        ratio=config.ratio,
        individual=individual,
        normalize=config.normalize_classes,
        seed=config.seed,
        settings=path_settings(config, workers=config.threads),
    )
    return X, m, fit


def summary_entries(config: RunConfig, X: TimeCourseMatrix, fit: RegimeFit) -> Dict[str, Any]:
    best = fit.best
    path = fit.path
    entries: Dict[str, Any] = {
        "command": "infer",
        "input": config.input,
        "variables": X.p,
        "transitions": X.n,
        "penalty": fit.regime.value,
        "criterion": fit.criterion.value,
        "grid_size": len(path.grid),
        "rho_max": path.grid[0],
        "rho_min": path.grid[-1],
        "levels_computed": len(path.estimates),
        "stop_reason": path.stop_reason.value,
        "selected_rho": best.rho,
        "df": best.df,
        "bic": best.bic,
        "aic": best.aic,
        "null_model": "yes" if fit.null_selected else "no",
    }
    if path.message:
        entries["stop_message"] = path.message
    if fit.initial is not None:
        entries["init_criterion"] = config.init_criterion
        entries["initial_rho"] = fit.initial.rho
        entries["initial_df"] = fit.initial.df
    if fit.classes is not None:
        entries["ratio"] = config.ratio
        entries["normalize_classes"] = "yes" if config.normalize_classes else "no"
        entries["hubs"] = [name for name, hub in zip(X.names, fit.classes.hub_mask) if hub]
        entries["class_source"] = fit.classes.source.value
        if fit.classes.degenerate:
            entries["classes_degenerate"] = "yes"
    entries["grid"] = list(path.grid)
    return entries


class InferenceTools:
    """Tools for inferring a network from time-course data."""

    def __init__(self, output_dir: Path, ledger: RunLedger):
        """Initialize inference tools with the output directory and run ledger."""
        self.output_dir = output_dir
        self.ledger = ledger

    async def infer(self, config: RunConfig, run_id: Optional[int] = None) -> Dict[str, Any]:
        """
        Infer the network and write its artifacts.

        Artifacts:
        - edges.tsv: source, target, weight of every selected edge
        - adjacency.csv: dense coefficient matrix with variable names
        - path.csv: rho, df, bic, aic and stop reason along the path
        - summary.txt: key-value run summary
        - network.dot: graph description for external viewers
        - classes.tsv: hub/leaf labels for class-based regimes
        - run_config.json: configuration replaying this run
        """
        try:
            X, _, fit = await asyncio.to_thread(run_inference, config)
            names = X.names
            writer = ArtifactWriter(self.output_dir, self.ledger, run_id)
            hubs = fit.classes.hub_mask if fit.classes is not None else None

            await writer.write("edges.tsv", render_edge_list(fit.best.A_hat, names))
            await writer.write("adjacency.csv", render_adjacency(fit.best.A_hat, names))
            await writer.write("path.csv", render_table(path_frame(fit.path)))
            if fit.initial_path is not None:
                await writer.write("initial_path.csv", render_table(path_frame(fit.initial_path)))
            if fit.classes is not None:
                await writer.write("classes.tsv", render_classes(fit.classes, names))
            await writer.write("network.dot", render_dot(fit.best.A_hat, names, hubs))
            summary = summary_entries(config, X, fit)
            await writer.write("summary.txt", render_summary(summary))
            await writer.write("run_config.json", config.to_json())

            if fit.null_selected:
                logger.info("The null model was selected; no edge inferred")
            return {
                "success": True,
                "exit_code": 0,
                "edges": fit.best.df,
                "selected_rho": fit.best.rho,
                "artifacts": writer.written,
                "summary": summary,
            }
        except Exception as e:  # pylint: disable=broad-except
            return failure_result(e)
