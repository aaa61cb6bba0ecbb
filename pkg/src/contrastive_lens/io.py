"""CSV matrix formats, JSON run reports, and atomic file output.

Floats are written with ``repr``, which round-trips float64 exactly, so a
write-then-read cycle reproduces matrices bit for bit. All files are
written atomically (temp file in the destination directory, then rename).
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

import numpy as np

from .datasets import LabeledDataset
from .errors import ValidationError

SCHEMA_VERSION = 1


def parse_matrix_csv(
    stream: IO[str],
    has_header: bool = False,
    label_column: int | None = None,
    name: str = "",
) -> LabeledDataset:
    """Parse a rectangular numeric CSV from a text stream.

    Rows are samples, columns features. Error messages cite 1-based file
    line numbers and 1-based column numbers.
    """
    reader = csv.reader(stream)
    rows: list[list[float]] = []
    labels: list[int] = []
    expected: int | None = None
    for line_no, fields in enumerate(reader, start=1):
        if line_no == 1 and has_header:
            continue
        if not fields or (len(fields) == 1 and fields[0].strip() == ""):
            continue  # blank line
        if expected is None:
            expected = len(fields)
            if label_column is not None and not 0 <= label_column < expected:
                raise ValidationError(
                    f"label column {label_column} out of range for {expected} fields"
                )
        elif len(fields) != expected:
            raise ValidationError(
                f"row {line_no}: expected {expected} fields, got {len(fields)}"
            )
        values: list[float] = []
        for col, cell in enumerate(fields):
            if label_column is not None and col == label_column:
                try:
                    labels.append(int(float(cell)))
                except ValueError:
                    raise ValidationError(
                        f"row {line_no}, column {col + 1}: cannot parse {cell.strip()!r} as a label"
                    ) from None
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise ValidationError(
                    f"row {line_no}, column {col + 1}: cannot parse {cell.strip()!r} as a number"
                ) from None
        rows.append(values)
    if not rows:
        raise ValidationError(f"empty CSV: no data rows in {name or 'input'}")
    data = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(data)):
        raise ValidationError(f"{name or 'input'} contains non-finite values")
    return LabeledDataset(
        data=data,
        labels=np.array(labels, dtype=np.int64) if label_column is not None else None,
        name=name,
    )


def read_matrix_csv(
    path, has_header: bool = False, label_column: int | None = None
) -> LabeledDataset:
    """Read a numeric CSV file; see ``parse_matrix_csv`` for the format."""
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"no such file: {path}")
    with path.open("r", newline="") as fh:
        return parse_matrix_csv(fh, has_header, label_column, name=str(path))


def _atomic_write(path: Path, write_fn) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            write_fn(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_matrix_csv(path, matrix, labels=None, header: list[str] | None = None) -> None:
    """Write a matrix as CSV; floats use exact (round-trip) repr.

    With ``labels`` given, they are appended as a final integer column.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix, got ndim={matrix.ndim}")
    if labels is not None and len(labels) != matrix.shape[0]:
        raise ValidationError("label count does not match row count")

    def _write(fh):
        writer = csv.writer(fh)
        if header is not None:
            writer.writerow(header)
        for i, row in enumerate(matrix):
            out = [repr(float(x)) for x in row]
            if labels is not None:
                out.append(str(int(labels[i])))
            writer.writerow(out)

    _atomic_write(Path(path), _write)


def write_json(path, payload: dict) -> None:
    """Write a JSON document atomically; floats keep full precision."""
    _atomic_write(Path(path), lambda fh: json.dump(payload, fh, indent=2))


def jsonable(obj):
    """Recursively convert numpy containers to plain Python for json.dump."""
    if isinstance(obj, np.ndarray):
        return [jsonable(x) for x in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    return obj


@dataclass
class RunReport:
    """Flat, versioned JSON payload describing one CLI run."""

    command: str
    parameters: dict
    alphas: list = field(default_factory=list)
    variance_pairs: list = field(default_factory=list)  # aligned with alphas
    medoid_alphas: list = field(default_factory=list)
    cluster_labels: list = field(default_factory=list)
    timings_ms: dict = field(default_factory=dict)
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variance_pairs and len(self.variance_pairs) != len(self.alphas):
            raise ValidationError(
                "variance_pairs must align one-to-one with alphas"
            )
        if any(t < 0 for t in self.timings_ms.values()):
            raise ValidationError("timings must be non-negative")

    def to_dict(self) -> dict:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "parameters": jsonable(self.parameters),
            "alphas": jsonable(self.alphas),
            "variance_pairs": jsonable(self.variance_pairs),
            "medoid_alphas": jsonable(self.medoid_alphas),
            "cluster_labels": jsonable(self.cluster_labels),
            "timings_ms": jsonable(self.timings_ms),
            "seed": self.seed,
        }
        payload.update(jsonable(self.extra))
        return payload

    def write(self, path) -> None:
        write_json(path, self.to_dict())
