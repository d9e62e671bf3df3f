"""
Logging and run bookkeeping for the command-line tools.

This module provides:
- Configuration of the "sparse_var" logger hierarchy (stderr plus optional file)
- An optional SQLite ledger of runs and the artifacts they emitted
- Validation of artifact paths against the output directory
"""

import hashlib
import logging
import sqlite3
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

LOGGER_NAME = "sparse_var"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# packages whose module loggers are routed through the run handlers
PACKAGE_LOGGERS = (
    "core",
    "solver",
    "penalty",
    "selection",
    "simulate",
    "evaluation",
    "tools",
    "utils",
)


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class RunLedger:
    """Sets up run logging and records commands and artifacts."""

    def __init__(
        self,
        level: Union[int, str] = logging.INFO,
        log_file: Optional[Union[str, Path]] = None,
        ledger_path: Optional[Union[str, Path]] = None,
    ) -> None:
        """Initialize logging handlers and, when a path is given, the ledger database."""
        self.logger: logging.Logger = logging.getLogger(LOGGER_NAME)
        self.ledger_db: Optional[sqlite3.Connection] = None
        self._handlers: list = []
        self._setup_logging(level, log_file)
        if ledger_path is not None:
            self._setup_ledger_database(Path(ledger_path))

    def _setup_logging(self, level: Union[int, str], log_file: Optional[Union[str, Path]]) -> None:
        """
        Attach stream and file handlers to the toolkit loggers.

        A file handler that cannot be opened is skipped with a warning on
        stderr; the run continues with stream logging only.
        """
        formatter = logging.Formatter(LOG_FORMAT)
        stream = logging.StreamHandler(sys.stderr)
        stream.setFormatter(formatter)
        self._handlers.append(stream)

        if log_file is not None:
            try:
                handler = logging.FileHandler(log_file)
                handler.setFormatter(formatter)
                self._handlers.append(handler)
            except (FileNotFoundError, PermissionError, OSError) as e:
                print(f"Warning: Could not setup file logging: {e}", file=sys.stderr)

        for name in (LOGGER_NAME,) + PACKAGE_LOGGERS:
            package_logger = logging.getLogger(name)
            package_logger.setLevel(level)
            for handler in self._handlers:
                package_logger.addHandler(handler)

    def _setup_ledger_database(self, path: Path) -> None:
        """
        Open the SQLite ledger.

        Tables:
        - run_log: one row per command with its config digest, status and exit code
        - artifact_log: every emitted file with its SHA-256
        """
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            self.ledger_db = sqlite3.connect(str(path), check_same_thread=False)
            self.ledger_db.execute(
                """
                CREATE TABLE IF NOT EXISTS run_log (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    started TEXT NOT NULL,
                    finished TEXT,
                    command TEXT NOT NULL,
                    config_digest TEXT,
                    status TEXT,
                    exit_code INTEGER,
                    message TEXT
                )
            """
            )
            self.ledger_db.execute(
                """
                CREATE TABLE IF NOT EXISTS artifact_log (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER NOT NULL,
                    path TEXT NOT NULL,
                    sha256 TEXT NOT NULL,
                    bytes INTEGER NOT NULL,
                    FOREIGN KEY (run_id) REFERENCES run_log (id)
                )
            """
            )
            self.ledger_db.commit()
        except (sqlite3.Error, OSError) as e:
            print(f"Warning: Could not setup run ledger: {e}", file=sys.stderr)
            self.ledger_db = None

    def start_run(self, command: str, config_digest: Optional[str] = None) -> Optional[int]:
        """Record the start of a command; returns the run id, None without a ledger."""
        self.logger.info("Starting %s", command)
        if self.ledger_db is None:
            return None
        try:
            cursor = self.ledger_db.execute(
                "INSERT INTO run_log (started, command, config_digest, status) VALUES (?, ?, ?, ?)",
                (datetime.now(timezone.utc).isoformat(), command, config_digest, "running"),
            )
            self.ledger_db.commit()
            return int(cursor.lastrowid)
        except sqlite3.Error as e:
            print(f"Warning: Could not record run start: {e}", file=sys.stderr)
            return None

    def finish_run(
        self, run_id: Optional[int], exit_code: int, message: Optional[str] = None
    ) -> None:
        status = "success" if exit_code == 0 else "failed"
        self.logger.info("Finished with status %s (exit code %d)", status, exit_code)
        if self.ledger_db is None or run_id is None:
            return
        try:
            self.ledger_db.execute(
                "UPDATE run_log SET finished = ?, status = ?, exit_code = ?, message = ? "
                "WHERE id = ?",
                (datetime.now(timezone.utc).isoformat(), status, exit_code, message, run_id),
            )
            self.ledger_db.commit()
        except sqlite3.Error as e:
            print(f"Warning: Could not record run end: {e}", file=sys.stderr)

    def record_artifact(self, run_id: Optional[int], path: Union[str, Path], text: str) -> str:
        """Log an emitted artifact and return its SHA-256."""
        digest = sha256_text(text)
        self.logger.debug("Wrote %s (sha256 %s)", path, digest[:12])
        if self.ledger_db is not None and run_id is not None:
            try:
                self.ledger_db.execute(
                    "INSERT INTO artifact_log (run_id, path, sha256, bytes) VALUES (?, ?, ?, ?)",
                    (run_id, str(path), digest, len(text.encode("utf-8"))),
                )
                self.ledger_db.commit()
            except sqlite3.Error as e:
                print(f"Warning: Could not record artifact: {e}", file=sys.stderr)
        return digest

    def validate_output_path(self, file_path: Union[str, Path], base_path: Path) -> Path:
        """
        Resolve an artifact path inside the output directory.

        Raises:
            ValueError: the path escapes base_path
        """
        path = Path(file_path)
        resolved = path.resolve() if path.is_absolute() else (base_path / path).resolve()
        try:
            resolved.relative_to(base_path.resolve())
        except ValueError as exc:
            raise ValueError(f"Path traversal detected: {file_path} escapes {base_path}") from exc
        return resolved

    def close(self) -> None:
        """Detach handlers and close the ledger."""
        for name in (LOGGER_NAME,) + PACKAGE_LOGGERS:
            package_logger = logging.getLogger(name)
            for handler in self._handlers:
                package_logger.removeHandler(handler)
        for handler in self._handlers[1:]:
            handler.close()
        self._handlers = []
        if self.ledger_db:
            self.ledger_db.close()
            self.ledger_db = None
