"""Saliency grids: loading, normalization, resampling, and the overlap score q.

A SaliencyGrid is a nonnegative W x H grid; once normalized it is a discrete
probability map. The agreement between a machine map and a human map is the
Bhattacharyya coefficient q = sum sqrt(pc * pe), computed cellwise at a shared
raster.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    ContractError,
    DegenerateMapError,
    GridDomainError,
    GridFormatError,
    GridShapeError,
)

NORMALIZATION_TOL = 1e-6


@dataclass(frozen=True)
class SaliencyGrid:
    """Row-major nonnegative grid; `normalized` marks a probability map."""

    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise GridFormatError(f"grid must be 2-D and nonempty, got shape {arr.shape}")
        if np.any(arr < 0):
            raise GridDomainError("grid contains negative values")
        if self.normalized and abs(arr.sum() - 1.0) > 1e-9:
            raise ContractError(f"grid declared normalized but sums to {arr.sum()!r}")
        object.__setattr__(self, "values", arr)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    def total(self) -> float:
        return float(self.values.sum())


@dataclass(frozen=True)
class OverlapReport:
    """Result of comparing two probability maps: the scalar q and the per-cell terms."""

    q: float
    agreement: SaliencyGrid
    pair_id: str = ""


def load_saliency_grid(raw: str | bytes | Path) -> SaliencyGrid:
    """Load an unnormalized grid from JSON text (fields width, height, values).

    A Path argument is read from disk; 16-bit grayscale images are accepted
    via `grid_from_image`.
    """
    if isinstance(raw, Path):
        raw = raw.read_text()
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise GridFormatError(f"not valid grid JSON: {exc}") from None
    for key in ("width", "height", "values"):
        if key not in doc:
            raise GridFormatError(f"grid file missing field {key!r}")
    w, h = int(doc["width"]), int(doc["height"])
    values = doc["values"]
    if w < 1 or h < 1:
        raise GridFormatError(f"invalid dimensions {w}x{h}")
    if len(values) != w * h:
        raise GridFormatError(f"expected {w * h} values for {w}x{h}, got {len(values)}")
    arr = np.asarray(values, dtype=np.float64).reshape(h, w)
    if np.any(arr < 0):
        raise GridDomainError("grid contains negative values")
    return SaliencyGrid(values=arr, normalized=False)


def grid_from_image(path: str | Path) -> SaliencyGrid:
    """Load a grayscale image as a grid, mapping intensity linearly to [0, 1]."""
    from PIL import Image

    img = Image.open(path)
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise GridFormatError("grid images must be single-channel grayscale")
    scale = 65535.0 if img.mode.startswith("I") else 255.0
    return SaliencyGrid(values=arr / scale, normalized=False)


def save_saliency_grid(grid: SaliencyGrid, path: str | Path | None = None) -> str:
    """Serialize a grid to the JSON grid format; writes to `path` when given."""
    doc = {
        "width": grid.width,
        "height": grid.height,
        "values": [float(v) for v in grid.values.ravel()],
    }
    text = json.dumps(doc)
    if path is not None:
        Path(path).write_text(text)
    return text


def normalize_map(grid: SaliencyGrid) -> SaliencyGrid:
    """Rescale a grid so its entries sum to 1."""
    total = grid.total()
    if total <= 0:
        raise DegenerateMapError("cannot normalize an all-zero grid")
    return SaliencyGrid(values=grid.values / total, normalized=True)


def _require_normalized(grid: SaliencyGrid, name: str) -> None:
    if not grid.normalized:
        raise ContractError(f"{name} must be a normalized map")
    if abs(grid.total() - 1.0) > NORMALIZATION_TOL:
        raise ContractError(f"{name} sums to {grid.total()!r}, expected 1")


def overlap_q(pc: SaliencyGrid, pe: SaliencyGrid, pair_id: str = "") -> OverlapReport:
    """Overlap score between two probability maps: q = sum sqrt(pc * pe).

    q is 0 for disjoint attention and 1 iff the maps are identical. The
    agreement grid holds the per-cell sqrt(pc * pe) terms; their sum is q.
    """
    if pc.values.shape != pe.values.shape:
        raise GridShapeError(
            f"dimension mismatch: {pc.width}x{pc.height} vs {pe.width}x{pe.height}"
        )
    _require_normalized(pc, "pc")
    _require_normalized(pe, "pe")
    agreement = np.sqrt(pc.values * pe.values)
    q = float(agreement.sum())
    return OverlapReport(q=q, agreement=SaliencyGrid(values=agreement), pair_id=pair_id)


def resample_grid(grid: SaliencyGrid, new_width: int, new_height: int) -> SaliencyGrid:
    """Bilinear resampling to a new raster; normalized inputs stay normalized."""
    if new_width < 1 or new_height < 1:
        raise GridFormatError(f"invalid target dimensions {new_width}x{new_height}")
    src = grid.values
    h, w = src.shape
    if (new_height, new_width) == (h, w):
        return grid

    # corner-aligned sampling: output corners coincide with input corners
    us = np.linspace(0, w - 1, new_width) if new_width > 1 else np.zeros(1)
    vs = np.linspace(0, h - 1, new_height) if new_height > 1 else np.zeros(1)
    u0 = np.clip(np.floor(us).astype(int), 0, w - 1)
    v0 = np.clip(np.floor(vs).astype(int), 0, h - 1)
    u1 = np.minimum(u0 + 1, w - 1)
    v1 = np.minimum(v0 + 1, h - 1)
    fu = us - u0
    fv = vs - v0

    top = src[v0][:, u0] * (1 - fu) + src[v0][:, u1] * fu
    bot = src[v1][:, u0] * (1 - fu) + src[v1][:, u1] * fu
    out = top * (1 - fv)[:, None] + bot * fv[:, None]
    out = np.maximum(out, 0.0)

    if grid.normalized:
        total = out.sum()
        if total <= 0:
            raise DegenerateMapError("resampled map lost all mass")
        return SaliencyGrid(values=out / total, normalized=True)
    return SaliencyGrid(values=out, normalized=False)
