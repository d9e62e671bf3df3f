"""
Readers and renderers for the toolkit's file formats.

- Time-course data: delimited text (comma or tab, detected from the header),
  first row variable names, "NA" or empty fields missing
- Classes: two columns, variable name and hub|leaf
- Edge lists: source, target and an optional weight, by variable name
- Dense adjacency, penalty path tables, run summaries and DOT graphs

Renderers return text so callers decide how it is written. Floats are
rendered with 17 significant digits, which reads back exactly.
"""

import io
import logging
import re
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import numpy as np
import pandas as pd

from core.time_course import TimeCourseMatrix
from penalty.classes import ClassSource, NodeClass, NodeClassification
from utils.errors import DataFormatError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

MISSING_TOKENS = ("", "NA")
FLOAT_FORMAT = "%.17g"
EDGE_HEADER = ("source", "target")
CLASS_HEADER_LABELS = ("label", "class")


def detect_delimiter(header_line: str) -> str:
    return "\t" if "\t" in header_line else ","


def _first_line(path: Path) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.readline()
    except FileNotFoundError as exc:
        raise DataFormatError(str(path), None, "file not found") from exc
    except (OSError, UnicodeDecodeError) as exc:
        raise DataFormatError(str(path), None, f"cannot read file ({exc})") from exc


def _read_cells(path: Path, header: Optional[int]) -> pd.DataFrame:
    """Read a delimited file as stripped strings, reporting parse errors by line."""
    first = _first_line(path)
    if not first.strip():
        raise DataFormatError(str(path), 1, "file is empty")
    try:
        frame = pd.read_csv(
            path,
            sep=detect_delimiter(first),
            header=header,
            dtype=str,
            keep_default_na=False,
            na_filter=False,
            skip_blank_lines=True,
            engine="python",
        )
    except pd.errors.ParserError as exc:
        match = re.search(r"line (\d+)", str(exc))
        line = int(match.group(1)) if match else None
        raise DataFormatError(str(path), line, "inconsistent number of fields") from exc
    return frame.apply(lambda column: column.str.strip())


# ----------------------------------------------------------------------------
# Time-course data
# ----------------------------------------------------------------------------


def read_time_course(path: PathLike) -> TimeCourseMatrix:
    """
    Read a raw (unstandardized) time-course matrix; missing cells become NaN.

    Raises:
        DataFormatError: unreadable file, duplicate names or non-numeric cells
    """
    path = Path(path)
    header = _first_line(path).rstrip("\r\n")
    names = [name.strip() for name in header.split(detect_delimiter(header))]
    # pandas renames repeated columns, so duplicates are checked on the raw header
    if len(set(names)) != len(names):
        raise DataFormatError(str(path), 1, "duplicate variable names in header")
    cells = _read_cells(path, header=0)
    if cells.empty:
        raise DataFormatError(str(path), 2, "no time points")

    missing = cells.isin(MISSING_TOKENS)
    numeric = cells.apply(pd.to_numeric, errors="coerce")
    bad = (numeric.isna() | ~np.isfinite(numeric.fillna(0.0))) & ~missing
    if bad.to_numpy().any():
        row, col = np.argwhere(bad.to_numpy())[0]
        raise DataFormatError(
            str(path),
            int(row) + 2,
            f"non-numeric value '{cells.iat[row, col]}' in column '{names[col]}'",
        )
    values = numeric.to_numpy(dtype=float)
    logger.debug("Read %d time point(s) x %d variable(s) from %s", *values.shape, path)
    return TimeCourseMatrix(values, tuple(names))


def render_time_course(X: TimeCourseMatrix) -> str:
    frame = pd.DataFrame(np.asarray(X.values), columns=list(X.names))
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="NA", lineterminator="\n")


# ----------------------------------------------------------------------------
# Node classes
# ----------------------------------------------------------------------------


def read_classes(path: PathLike, names: Sequence[str]) -> NodeClassification:
    """
    Read a hub/leaf classes file over the node universe names.

    An optional header row is recognised by its label column ("label" or
    "class"). Unlisted variables default to leaf with a warning.
    """
    path = Path(path)
    cells = _read_cells(path, header=None)
    if cells.shape[1] < 2:
        raise DataFormatError(str(path), 1, "expected two columns: name, hub|leaf")
    index = {name: k for k, name in enumerate(names)}
    labels: Dict[int, NodeClass] = {}
    start = 1 if cells.iat[0, 1].lower() in CLASS_HEADER_LABELS else 0
    for row in range(start, len(cells)):
        line = row + 1
        name, label = cells.iat[row, 0], cells.iat[row, 1].lower()
        if name not in index:
            raise DataFormatError(str(path), line, f"unknown variable '{name}'")
        if label not in (NodeClass.HUB.value, NodeClass.LEAF.value):
            raise DataFormatError(str(path), line, f"label must be hub or leaf, got '{label}'")
        if index[name] in labels:
            raise DataFormatError(str(path), line, f"variable '{name}' listed twice")
        labels[index[name]] = NodeClass(label)

    unlisted = [name for name in names if index[name] not in labels]
    if unlisted:
        logger.warning(
            "%d variable(s) missing from %s default to leaf: %s",
            len(unlisted),
            path,
            ", ".join(unlisted[:10]),
        )
    return NodeClassification(
        labels=tuple(labels.get(k, NodeClass.LEAF) for k in range(len(names))),
        source=ClassSource.KNOWN,
    )


def render_classes(classes: NodeClassification, names: Sequence[str]) -> str:
    frame = pd.DataFrame({"name": list(names), "label": [label.value for label in classes.labels]})
    return frame.to_csv(sep="\t", index=False, lineterminator="\n")


# ----------------------------------------------------------------------------
# Edge lists
# ----------------------------------------------------------------------------


def edge_frame(A: np.ndarray, names: Sequence[str]) -> pd.DataFrame:
    """Nonzero entries of A in row-major order as (source, target, weight)."""
    rows, cols = np.nonzero(np.asarray(A))
    return pd.DataFrame(
        {
            "source": [names[i] for i in rows],
            "target": [names[j] for j in cols],
            "weight": np.asarray(A)[rows, cols].astype(float),
        }
    )


def render_edge_list(A: np.ndarray, names: Sequence[str]) -> str:
    return edge_frame(A, names).to_csv(
        sep="\t", index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )


def read_edge_list(path: PathLike) -> pd.DataFrame:
    """
    Read an edge list into columns source, target and weight.

    A header row (source, target) is optional; a missing weight column reads as
    NaN and is ignored by evaluation.
    """
    path = Path(path)
    if not _first_line(path).strip():
        return pd.DataFrame({"source": [], "target": [], "weight": []})
    cells = _read_cells(path, header=None)
    if cells.shape[1] < 2:
        raise DataFormatError(str(path), 1, "expected at least two columns: source, target")
    start = 1 if tuple(cells.iloc[0, :2].str.lower()) == EDGE_HEADER else 0

    records = []
    for row in range(start, len(cells)):
        source, target = cells.iat[row, 0], cells.iat[row, 1]
        if not source or not target:
            raise DataFormatError(str(path), row + 1, "empty source or target")
        weight = float("nan")
        if cells.shape[1] > 2 and cells.iat[row, 2] not in MISSING_TOKENS:
            try:
                weight = float(cells.iat[row, 2])
            except ValueError as exc:
                raise DataFormatError(
                    str(path), row + 1, f"non-numeric weight '{cells.iat[row, 2]}'"
                ) from exc
        records.append((source, target, weight))
    return pd.DataFrame(records, columns=["source", "target", "weight"])


def edge_names(frame: pd.DataFrame) -> List[str]:
    """Variable names occurring in an edge list, in order of first appearance."""
    seen: Dict[str, None] = {}
    for source, target in zip(frame["source"], frame["target"]):
        seen.setdefault(source, None)
        seen.setdefault(target, None)
    return list(seen)


def edges_to_indices(
    frame: pd.DataFrame, names: Sequence[str], path: PathLike = "<edges>"
) -> Set[Tuple[int, int]]:
    index = {name: k for k, name in enumerate(names)}
    edges = set()
    for row, (source, target) in enumerate(zip(frame["source"], frame["target"])):
        if source not in index or target not in index:
            unknown = source if source not in index else target
            raise DataFormatError(
                str(path), None, f"edge {row + 1} uses unknown variable '{unknown}'"
            )
        edges.add((index[source], index[target]))
    return edges


def edges_to_matrix(
    frame: pd.DataFrame, names: Sequence[str], path: PathLike = "<edges>"
) -> np.ndarray:
    """Indicator adjacency of an edge list over the universe names."""
    A = np.zeros((len(names), len(names)))
    for source, target in edges_to_indices(frame, names, path):
        A[source, target] = 1.0
    return A


# ----------------------------------------------------------------------------
# Dense matrices, tables and summaries
# ----------------------------------------------------------------------------


def render_adjacency(A: np.ndarray, names: Sequence[str]) -> str:
    frame = pd.DataFrame(np.asarray(A, dtype=float), index=list(names), columns=list(names))
    return frame.to_csv(float_format=FLOAT_FORMAT, lineterminator="\n")


def read_adjacency(path: PathLike) -> Tuple[np.ndarray, Tuple[str, ...]]:
    """
    Read a dense square matrix with variable names on both axes.

    Raises:
        DataFormatError: unreadable file, mismatched names or non-numeric cells
    """
    path = Path(path)
    cells = _read_cells(path, header=None)
    names = tuple(cells.iloc[0, 1:])
    if len(set(names)) != len(names):
        raise DataFormatError(str(path), 1, "duplicate variable names in header")
    body = cells.iloc[1:]
    if body.shape[0] != len(names):
        raise DataFormatError(
            str(path), None, f"expected {len(names)} matrix row(s), found {body.shape[0]}"
        )
    for line, (row_name, column_name) in enumerate(zip(body.iloc[:, 0], names), start=2):
        if row_name != column_name:
            raise DataFormatError(
                str(path), line, f"row name '{row_name}' differs from column '{column_name}'"
            )

    values = body.iloc[:, 1:]
    numeric = values.apply(pd.to_numeric, errors="coerce")
    bad = (numeric.isna() | ~np.isfinite(numeric.fillna(0.0))).to_numpy()
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise DataFormatError(
            str(path),
            int(row) + 2,
            f"non-numeric value '{values.iat[row, col]}' in column '{names[col]}'",
        )
    return numeric.to_numpy(dtype=float), names


def render_table(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="NA", lineterminator="\n")


def path_frame(penalty_path) -> pd.DataFrame:
    """One row per computed penalty level of a PenaltyPath."""
    return pd.DataFrame(
        {
            "rho": [estimate.rho for estimate in penalty_path.estimates],
            "df": [estimate.df for estimate in penalty_path.estimates],
            "bic": [estimate.bic for estimate in penalty_path.estimates],
            "aic": [estimate.aic for estimate in penalty_path.estimates],
            "stop_reason": [penalty_path.stop_reason.value] * len(penalty_path.estimates),
        },
        columns=["rho", "df", "bic", "aic", "stop_reason"],
    )


def render_summary(entries: Mapping[str, object]) -> str:
    """Key-value text, one "key: value" line per entry in insertion order."""
    buffer = io.StringIO()
    for key, value in entries.items():
        if isinstance(value, float):
            value = FLOAT_FORMAT % value
        elif isinstance(value, (list, tuple)):
            value = " ".join(
                FLOAT_FORMAT % item if isinstance(item, float) else str(item) for item in value
            )
        buffer.write(f"{key}: {value}\n")
    return buffer.getvalue()


def render_dot(A: np.ndarray, names: Sequence[str], hubs: Optional[Iterable[bool]] = None) -> str:
    """Directed graph description in DOT text; hubs are drawn as boxes."""
    A = np.asarray(A)
    lines = ["digraph network {"]
    hub_flags = list(hubs) if hubs is not None else [False] * len(names)
    for name, hub in zip(names, hub_flags):
        shape = "box" if hub else "ellipse"
        lines.append(f'  "{name}" [shape={shape}];')
    for i, j in zip(*np.nonzero(A)):
        color = "red" if A[i, j] > 0 else "blue"
        label = "%.3g" % A[i, j]
        lines.append(f'  "{names[i]}" -> "{names[j]}" [label="{label}", color={color}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
