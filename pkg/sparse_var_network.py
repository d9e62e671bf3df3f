#!/usr/bin/env python3
"""
Sparse VAR network toolkit - command-line entry point

Infers directed networks from time-course data with a sparse VAR(1) model and
weighted-Lasso penalties, and benchmarks the penalty regimes on simulated
hub-structured networks.

This is the main module that coordinates the tool modules:
- tools.inference_tools: network inference from a data file
- tools.simulation_tools: synthetic data generation
- tools.benchmark_tools: simulation benchmark and timing sweep
- tools.evaluation_tools: scoring an edge list against a gold standard
- utils.run_ledger: logging and run bookkeeping
"""

import argparse
import asyncio
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

from tools.artifacts import failure_result
from tools.benchmark_tools import BenchmarkTools
from tools.evaluation_tools import EvaluationTools
from tools.inference_tools import InferenceTools
from tools.simulation_tools import SimulationTools
from utils.config import (
    ALL_CRITERIA,
    ALL_REGIMES,
    RunConfig,
    apply_environment,
    load_environment,
    load_run_config,
    merge_overrides,
)
from utils.errors import ConfigError
from utils.run_ledger import RunLedger

# argparse destination -> location in RunConfig
OVERRIDE_PATHS: Dict[str, Tuple[str, ...]] = {
    "input": ("input",),
    "output": ("output",),
    "seed": ("seed",),
    "threads": ("threads",),
    "log_level": ("log_level",),
    "log_file": ("log_file",),
    "ledger": ("ledger",),
    "penalty": ("penalty",),
    "classes": ("classes",),
    "individual": ("individual",),
    "ratio": ("ratio",),
    "normalize_classes": ("normalize_classes",),
    "criterion": ("criterion",),
    "init_criterion": ("init_criterion",),
    "grid_size": ("grid_size",),
    "terminal_ratio": ("terminal_ratio",),
    "tol": ("tol",),
    "impute": ("impute",),
    "p": ("simulation", "p"),
    "n": ("simulation", "n"),
    "replicates": ("simulation", "replicates"),
    "edges": ("simulation", "edges"),
    "hub_prob": ("simulation", "hub_prob"),
    "hub_to_leaf": ("simulation", "hub_to_leaf"),
    "sigma2": ("simulation", "sigma2"),
    "stationary": ("simulation", "stationary"),
    "settings": ("bench", "settings"),
    "regimes": ("bench", "regimes"),
    "criteria": ("bench", "criteria"),
    "irrepresentability": ("bench", "irrepresentability"),
    "timing": ("bench", "timing"),
    "timing_nodes": ("bench", "timing_nodes"),
    "timing_points": ("bench", "timing_points"),
    "estimate": ("eval", "estimate"),
    "truth": ("eval", "truth"),
    "nodes": ("eval", "nodes"),
    "off_diagonal": ("eval", "off_diagonal"),
}


class NetworkInferenceApp:
    """Main application class that coordinates all tool modules."""

    def __init__(self, config: RunConfig):
        """Initialize logging, the run ledger and the tool modules."""
        self.config = config
        self.ledger = RunLedger(
            level=config.log_level, log_file=config.log_file, ledger_path=config.ledger
        )
        self.output_dir: Optional[Path] = None
        self.inference_tools: Optional[InferenceTools] = None
        self.simulation_tools: Optional[SimulationTools] = None
        self.benchmark_tools: Optional[BenchmarkTools] = None
        self.evaluation_tools: Optional[EvaluationTools] = None
        self.set_output_dir(config.output)

    def set_output_dir(self, output_dir: str) -> None:
        """Set the output directory and initialize the tool modules."""
        self.output_dir = Path(output_dir)
        self.inference_tools = InferenceTools(self.output_dir, self.ledger)
        self.simulation_tools = SimulationTools(self.output_dir, self.ledger)
        self.benchmark_tools = BenchmarkTools(self.output_dir, self.ledger)
        self.evaluation_tools = EvaluationTools(self.output_dir, self.ledger)

    async def run(self, config: Optional[RunConfig] = None) -> Dict[str, Any]:
        """Dispatch the configured command and record it in the ledger."""
        config = config or self.config
        run_id = self.ledger.start_run(config.command, config.digest())
        try:
            if config.command == "infer":
                result = await self.inference_tools.infer(config, run_id)
            elif config.command == "simulate":
                result = await self.simulation_tools.simulate(config, run_id)
            elif config.command == "bench":
                result = await self.benchmark_tools.bench(config, run_id)
            elif config.command == "eval":
                result = await self.evaluation_tools.evaluate(config, run_id)
            else:
                result = failure_result(ConfigError(f"Unknown command: {config.command}"))
        except Exception as e:  # pylint: disable=broad-except
            result = failure_result(e)
        self.ledger.finish_run(run_id, result["exit_code"], result.get("error"))
        return result

    def cleanup(self) -> None:
        """Cleanup resources."""
        if self.ledger:
            self.ledger.close()


def create_app(config: Optional[RunConfig] = None) -> NetworkInferenceApp:
    """Create and configure the application."""
    return NetworkInferenceApp(config or RunConfig())


def _setting(text: str) -> Dict[str, int]:
    try:
        values = [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"setting must be P,N[,REPLICATES], got '{text}'") from exc
    if len(values) not in (2, 3):
        raise argparse.ArgumentTypeError(f"setting must be P,N[,REPLICATES], got '{text}'")
    setting = {"p": values[0], "n": values[1]}
    if len(values) == 3:
        setting["replicates"] = values[2]
    return setting


def _flag(parser: argparse.ArgumentParser, name: str, help_text: str, value: bool = True) -> None:
    parser.add_argument(name, action="store_const", const=value, default=None, help=help_text)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON run configuration (flags override it)")
    parser.add_argument("-o", "--output", help="output directory")
    parser.add_argument("--seed", type=int, help="master random seed")
    parser.add_argument("--threads", type=int, help="worker threads")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--log-file", help="also log to this file")
    parser.add_argument("--ledger", help="SQLite ledger recording runs and artifacts")


def _add_fitting(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ratio", type=float, help="leaf/hub penalty ratio (default 2)")
    _flag(
        parser,
        "--no-normalize-classes",
        "use rho_hub = 1 instead of unit-mean class weights",
        value=False,
    )
    parser.add_argument("--init-criterion", choices=ALL_CRITERIA, help="criterion selecting A0")
    parser.add_argument("--grid-size", type=int, help="penalty grid points (default 50)")
    parser.add_argument("--terminal-ratio", type=float, help="last/first grid level (default 0.01)")
    parser.add_argument("--tol", type=float, help="solver optimality tolerance")


def _add_simulation(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--edges", type=int, help="edge count K (default 2p)")
    parser.add_argument("--hub-prob", type=float, help="hub probability (default 0.1)")
    parser.add_argument("--hub-to-leaf", type=float, help="hub->leaf edge fraction (default 0.85)")
    parser.add_argument("--sigma2", type=float, help="noise variance (default 0.1)")
    _flag(
        parser,
        "--allow-unstable",
        "keep coefficient draws with spectral radius >= 1",
        value=False,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparse-var-network",
        description="Sparse VAR(1) network inference with structured weighted-Lasso penalties",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    infer = commands.add_parser("infer", help="infer a network from a data file")
    infer.add_argument("input", nargs="?", help="delimited time-course data file")
    _add_common(infer)
    infer.add_argument("--penalty", choices=ALL_REGIMES, help="penalty regime (default lasso)")
    infer.add_argument("--classes", help="hub/leaf classes file (known regime)")
    infer.add_argument("--individual", help="adjacency CSV of individual weights rho_ij")
    infer.add_argument("--criterion", choices=ALL_CRITERIA, help="selection criterion")
    _flag(infer, "--impute", "impute missing values from neighbouring time points")
    _add_fitting(infer)

    simulate = commands.add_parser("simulate", help="simulate hub-structured VAR(1) data")
    _add_common(simulate)
    simulate.add_argument("--p", type=int, help="number of variables")
    simulate.add_argument("--n", type=int, help="number of transitions")
    simulate.add_argument("--replicates", type=int, help="number of data sets")
    _add_simulation(simulate)

    bench = commands.add_parser("bench", help="benchmark the penalty regimes")
    _add_common(bench)
    bench.add_argument(
        "--setting",
        dest="settings",
        type=_setting,
        action="append",
        help="P,N[,REPLICATES]; repeatable",
    )
    bench.add_argument("--regimes", nargs="+", choices=ALL_REGIMES)
    bench.add_argument("--criteria", nargs="+", choices=ALL_CRITERIA)
    bench.add_argument("--criterion", choices=ALL_CRITERIA, help="criterion for timing runs")
    _flag(bench, "--no-irrepresentability", "skip the irrepresentability audit", value=False)
    _flag(bench, "--timing", "time the inferred-classes pipeline over node counts")
    bench.add_argument("--timing-nodes", type=int, nargs="+", help="node counts for --timing")
    bench.add_argument("--timing-points", type=int, help="time points for --timing (default 92)")
    _add_fitting(bench)
    _add_simulation(bench)

    evaluate = commands.add_parser("eval", help="score an edge list against a gold standard")
    evaluate.add_argument("estimate", nargs="?", help="estimated edge list")
    evaluate.add_argument("truth", nargs="?", help="true edge list")
    _add_common(evaluate)
    evaluate.add_argument("--nodes", help="data file or name list fixing the node universe")
    _flag(evaluate, "--off-diagonal", "exclude self-loops from counting")
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    """Nested override mapping of every flag given explicitly."""
    values = vars(args)
    # store_const flags carry their own destination name
    flag_dests = {
        "no_normalize_classes": "normalize_classes",
        "no_irrepresentability": "irrepresentability",
        "allow_unstable": "stationary",
    }
    for flag, dest in flag_dests.items():
        if values.get(flag) is not None:
            values[dest] = values[flag]

    overrides: Dict[str, Any] = {"command": args.command}
    for dest, location in OVERRIDE_PATHS.items():
        value = values.get(dest)
        if value is None:
            continue
        target = overrides
        for key in location[:-1]:
            target = target.setdefault(key, {})
        target[location[-1]] = value
    return overrides


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags, then the environment."""
    base = load_run_config(args.config) if getattr(args, "config", None) else RunConfig()
    return apply_environment(merge_overrides(base, overrides_from_args(args)))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    load_environment()
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)

    try:
        config = config_from_args(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code

    app = create_app(config)
    try:
        result = asyncio.run(app.run(config))
    finally:
        app.cleanup()

    if not result["success"]:
        print(f"error: {result['error']}", file=sys.stderr)
    return int(result["exit_code"])


if __name__ == "__main__":
    sys.exit(main())
