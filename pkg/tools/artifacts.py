"""
Shared plumbing for the command tools.

This module provides:
- ArtifactWriter: asynchronous, ledger-recorded writes inside an output directory
- failure_result: conversion of exceptions into the tools' result dictionaries
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import aiofiles

from utils.errors import ConfigError, NetworkInferenceError
from utils.run_ledger import RunLedger

logger = logging.getLogger(__name__)


class ArtifactWriter:
    """Writes text artifacts below one output directory."""

    def __init__(self, output_dir: Path, ledger: RunLedger, run_id: Optional[int] = None):
        self.output_dir = Path(output_dir)
        self.ledger = ledger
        self.run_id = run_id
        self.written: List[str] = []

    async def write(self, relative_path: str, text: str) -> Path:
        """Write text to output_dir/relative_path and record it in the ledger."""
        try:
            path = self.ledger.validate_output_path(relative_path, self.output_dir)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        path.parent.mkdir(parents=True, exist_ok=True)
        async with aiofiles.open(path, "w", encoding="utf-8", newline="\n") as handle:
            await handle.write(text)
        self.ledger.record_artifact(self.run_id, path, text)
        self.written.append(str(Path(relative_path)))
        return path


def failure_result(exc: BaseException) -> Dict[str, Any]:
    """Result dictionary for a failed command, carrying its exit code."""
    if isinstance(exc, NetworkInferenceError):
        logger.debug("Command failed: %s", exc)
        return {
            "success": False,
            "error": str(exc),
            "error_type": type(exc).__name__,
            "exit_code": exc.exit_code,
        }
    logger.exception("Unexpected failure")
    return {
        "success": False,
        "error": f"Unexpected error: {exc}",
        "error_type": type(exc).__name__,
        "exit_code": NetworkInferenceError.exit_code,
    }
