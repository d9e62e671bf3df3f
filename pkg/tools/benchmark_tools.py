"""
Simulation benchmark of the four penalty regimes.

This module provides the bench command:
- Replicates per (p, n, replicates) setting, each on its own seed stream
- All configured regimes and criteria fitted and scored against the truth
- Irrepresentability audit of every replicate
- Aggregate precision / recall / fallout tables with standard errors
- A timing mode sweeping the number of nodes at fixed time points

Replicates run on a thread pool; tables are assembled in replicate order so
they do not depend on scheduling.
"""

import asyncio
import logging
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from tqdm.asyncio import tqdm as tqdm_asyncio

from core.moments import empirical_moments
from evaluation.metrics import confusion, rates, summarize_rates
from penalty.weights import PenaltyRegime
from selection.criteria import Criterion
from selection.path import select_best
from selection.pipeline import PathSettings, fit_regime, initial_estimate
from simulate.instances import simulate_instance
from simulate.irrepresentability import check_irrepresentability
from tools.artifacts import ArtifactWriter, failure_result
from utils.config import BenchSetting, RunConfig
from utils.errors import NetworkInferenceError, SingularSupportBlock
from utils.formats import render_table
from utils.run_ledger import RunLedger

logger = logging.getLogger(__name__)

SUMMARY_KEYS = ("setting", "p", "n", "method", "criterion")
TIMING_SEED_KEY = 1_000_000


def setting_label(setting: BenchSetting) -> str:
    return f"p{setting.p}_n{setting.n}"


def _settings(config: RunConfig) -> PathSettings:
    return PathSettings(
        grid_size=config.grid_size, terminal_ratio=config.terminal_ratio, tol=config.tol
    )


def run_replicate(
    config: RunConfig, setting_index: int, setting: BenchSetting, replicate: int
) -> Dict[str, Any]:
    """
    Simulate one replicate and fit every configured regime on it.

    Returns a dict with metric rows, the irrepresentability record and,
    on failure, the error message.
    """
    sim = config.simulation
    label = setting_label(setting)
    base = {"setting": label, "p": setting.p, "n": setting.n, "replicate": replicate}
    try:
        instance = simulate_instance(
            setting.p,
            setting.n,
            K=sim.edges,
            hub_prob=sim.hub_prob,
            hub_to_leaf=sim.hub_to_leaf,
            sigma2=sim.sigma2,
            stationary=sim.stationary,
            seed=config.seed,
            keys=(setting_index, replicate),
        )
        m = empirical_moments(instance.X)
        irrepresentability = None
        if config.bench.irrepresentability:
            try:
                report = check_irrepresentability(m, instance.A_true)
                fraction = report.fraction_failing
            except SingularSupportBlock as e:
                # metric rows stay; only this audit entry is missing
                logger.warning("Audit of replicate %d of %s skipped: %s", replicate, label, e)
                fraction = np.nan
            irrepresentability = {**base, "fraction_failing": fraction}

        settings = _settings(config)
        initial = None
        rows = []
        for regime_name in config.bench.regimes:
            regime = PenaltyRegime(regime_name)
            needs_initial = regime in (PenaltyRegime.ADAPTIVE, PenaltyRegime.INFERRED_CLASSES)
            if needs_initial and initial is None:
                initial = initial_estimate(m, Criterion(config.init_criterion), settings)
            fit = fit_regime(
                m,
                regime,
                criterion=Criterion(config.bench.criteria[0]),
                classes=instance.classes if regime is PenaltyRegime.KNOWN_CLASSES else None,
                ratio=config.ratio,
                normalize=config.normalize_classes,
                seed=config.seed,
                settings=settings,
                initial=initial,
            )
            hub_accuracy = np.nan
            if regime is PenaltyRegime.INFERRED_CLASSES and fit.classes is not None:
                hub_accuracy = float(np.mean(fit.classes.hub_mask == instance.classes.hub_mask))
            for criterion_name in config.bench.criteria:
                best = select_best(fit.path, Criterion(criterion_name))
                counts = confusion(best.A_hat, instance.edges)
                rows.append(
                    {
                        **base,
                        "method": regime.value,
                        "criterion": criterion_name,
                        "rho": best.rho,
                        "df": best.df,
                        "tp": counts.tp,
                        "fp": counts.fp,
                        "tn": counts.tn,
                        "fn": counts.fn,
                        **rates(counts).as_dict(),
                        "hub_accuracy": hub_accuracy,
                    }
                )
        return {"rows": rows, "irrepresentability": irrepresentability, "error": None}
    except NetworkInferenceError as e:
        logger.warning("Replicate %d of %s excluded: %s", replicate, label, e)
        return {
            "rows": [],
            "irrepresentability": None,
            "error": {**base, "error_type": type(e).__name__, "message": str(e)},
        }


def run_timing_point(config: RunConfig, p: int) -> Dict[str, Any]:
    """Wall time of the inferred-classes pipeline on one simulated instance."""
    sim = config.simulation
    n = config.bench.timing_points
    instance = simulate_instance(
        p,
        n,
        K=sim.edges,
        hub_prob=sim.hub_prob,
        hub_to_leaf=sim.hub_to_leaf,
        sigma2=sim.sigma2,
        stationary=sim.stationary,
        seed=config.seed,
        keys=(TIMING_SEED_KEY, p),
    )
    started = time.perf_counter()
    m = empirical_moments(instance.X)
    fit = fit_regime(
        m,
        PenaltyRegime.INFERRED_CLASSES,
        criterion=Criterion(config.criterion),
        init_criterion=Criterion(config.init_criterion),
        ratio=config.ratio,
        seed=config.seed,
        settings=_settings(config),
    )
    seconds = time.perf_counter() - started
    logger.info("Timing p=%d n=%d: %.3fs", p, n, seconds)
    return {
        "p": p,
        "n": n,
        "seconds": seconds,
        "levels": len(fit.path.estimates) + len(fit.initial_path.estimates),
        "df": fit.best.df,
    }


def irrepresentability_summary(
    records: List[Dict[str, Any]], failures: pd.DataFrame
) -> pd.DataFrame:
    """
    Failing fraction per setting over audited replicates.

    Replicates whose audit hit a singular support block are counted in
    audit_excluded; replicates excluded altogether in failed_replicates.
    """
    frame = pd.DataFrame(records, columns=["setting", "p", "n", "replicate", "fraction_failing"])
    frame["fraction_failing"] = frame["fraction_failing"].astype(float)
    grouped = frame.groupby(["setting", "p", "n"], sort=True)["fraction_failing"]
    summary = grouped.agg(
        fraction_failing_mean="mean",
        fraction_failing_se="sem",
        replicates="count",
        audit_excluded=lambda values: int(values.isna().sum()),
    ).reset_index()
    failed = failures.groupby("setting").size() if not failures.empty else pd.Series(dtype=int)
    summary["failed_replicates"] = [int(failed.get(label, 0)) for label in summary["setting"]]
    return summary


class BenchmarkTools:
    """Tools for reproducing the simulation benchmark."""

    def __init__(self, output_dir: Path, ledger: RunLedger):
        """Initialize benchmark tools with the output directory and run ledger."""
        self.output_dir = output_dir
        self.ledger = ledger

    async def _gather(self, jobs: list, workers: int, description: str) -> list:
        semaphore = asyncio.Semaphore(workers)

        async def bounded(job):
            async with semaphore:
                return await asyncio.to_thread(*job)

        return await tqdm_asyncio.gather(
            *(bounded(job) for job in jobs),
            desc=description,
            unit="replicate",
            disable=not logger.isEnabledFor(logging.INFO),
        )

    async def bench(self, config: RunConfig, run_id: Optional[int] = None) -> Dict[str, Any]:
        """
        Run the benchmark and write its tables.

        Artifacts:
        - bench_metrics.csv: one row per (replicate, regime, criterion)
        - bench_summary.csv: mean, standard error and defined count of every rate
        - irrepresentability.csv: failing fraction per setting
        - bench_failures.csv: excluded replicates with their errors
        - timing.csv: timing mode only
        """
        try:
            writer = ArtifactWriter(self.output_dir, self.ledger, run_id)
            workers = config.threads or 1
            if config.bench.timing:
                return await self._timing(config, writer)

            jobs = [
                (run_replicate, config, index, setting, replicate)
                for index, setting in enumerate(config.bench.settings)
                for replicate in range(setting.replicates)
            ]
            results = await self._gather(jobs, workers, "bench")

            rows = [row for result in results for row in result["rows"]]
            failures = pd.DataFrame(
                [result["error"] for result in results if result["error"] is not None],
                columns=["setting", "p", "n", "replicate", "error_type", "message"],
            )
            metrics = pd.DataFrame(rows)
            summary = summarize_rates(metrics, by=SUMMARY_KEYS)
            await writer.write("bench_metrics.csv", render_table(metrics))
            await writer.write("bench_summary.csv", render_table(summary))
            await writer.write("bench_failures.csv", render_table(failures))
            if config.bench.irrepresentability:
                records = [
                    result["irrepresentability"]
                    for result in results
                    if result["irrepresentability"] is not None
                ]
                table = irrepresentability_summary(records, failures)
                await writer.write("irrepresentability.csv", render_table(table))
            await writer.write("run_config.json", config.to_json())

            logger.info(
                "Benchmark finished: %d replicate(s), %d excluded", len(jobs), len(failures)
            )
            return {
                "success": True,
                "exit_code": 0,
                "replicates": len(jobs),
                "failed_replicates": len(failures),
                "artifacts": writer.written,
            }
        except Exception as e:  # pylint: disable=broad-except
            return failure_result(e)

    async def _timing(self, config: RunConfig, writer: ArtifactWriter) -> Dict[str, Any]:
        records = []
        # one timing point at a time
        for p in config.bench.timing_nodes:
            records.append(await asyncio.to_thread(run_timing_point, config, p))
        await writer.write("timing.csv", render_table(pd.DataFrame(records)))
        await writer.write("run_config.json", config.to_json())
        return {
            "success": True,
            "exit_code": 0,
            "timing_points": len(records),
            "artifacts": writer.written,
        }
