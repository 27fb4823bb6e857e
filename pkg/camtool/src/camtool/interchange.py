"""Writers and validators for the analysis toolkit's interchange formats.

Grid files and score files are the contract between this trainer and the
downstream attention-analysis tooling; every exported file is re-parsed by
the validators here before an export is considered complete.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


class ExportFormatError(RuntimeError):
    pass


def write_grid(arr: np.ndarray, path: str | Path) -> None:
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim != 2:
        raise ExportFormatError("grid must be 2-D")
    if np.any(arr < 0):
        raise ExportFormatError("grid values must be nonnegative")
    doc = {
        "width": arr.shape[1],
        "height": arr.shape[0],
        "values": [float(v) for v in arr.ravel()],
    }
    Path(path).write_text(json.dumps(doc))


def validate_grid_file(path: str | Path) -> None:
    doc = json.loads(Path(path).read_text())
    w, h, values = int(doc["width"]), int(doc["height"]), doc["values"]
    if w < 1 or h < 1 or len(values) != w * h:
        raise ExportFormatError(f"{path}: value count does not match {w}x{h}")
    if any(v < 0 for v in values):
        raise ExportFormatError(f"{path}: negative grid value")


def write_score_matrix(
    softmax_rows: np.ndarray,
    labels: list[int],
    splits: list[int],
    path: str | Path,
) -> None:
    softmax_rows = np.asarray(softmax_rows, dtype=np.float64)
    doc = {
        "classes": softmax_rows.shape[1],
        "splits": max(splits) + 1 if splits else 0,
        "rows": [
            {
                "softmax": [float(v) for v in softmax_rows[i]],
                "label": int(labels[i]),
                "split": int(splits[i]),
            }
            for i in range(softmax_rows.shape[0])
        ],
    }
    Path(path).write_text(json.dumps(doc))


def validate_score_file(path: str | Path) -> None:
    doc = json.loads(Path(path).read_text())
    classes = int(doc["classes"])
    for i, row in enumerate(doc["rows"]):
        softmax = row["softmax"]
        if len(softmax) != classes:
            raise ExportFormatError(f"{path}: row {i} has {len(softmax)} entries")
        if abs(sum(softmax) - 1.0) > 1e-6:
            raise ExportFormatError(f"{path}: row {i} softmax sums to {sum(softmax)}")
        if not 0 <= int(row["label"]) < classes:
            raise ExportFormatError(f"{path}: row {i} label out of range")
