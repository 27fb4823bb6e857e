"""Synthetic separable texture dataset with a planted discriminative patch."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image

from .data import ManifestRow, save_manifest


def _texture(cls: int, patch: int) -> np.ndarray:
    """Class-specific binary texture in patch-local coordinates.

    Every class carries positive evidence (bright structure), so a rectified
    gradient-weighted map has mass to place on the patch.
    """
    py, px = np.mgrid[0:patch, 0:patch]
    if cls == 0:  # solid fill
        return np.ones((patch, patch))
    if cls == 1:  # vertical stripes, period 4
        return ((px // 2) % 2 == 0).astype(np.float64)
    if cls == 2:  # horizontal stripes, period 4
        return ((py // 2) % 2 == 0).astype(np.float64)
    if cls == 3:  # 2x2 checkerboard
        return ((px // 2 + py // 2) % 2 == 0).astype(np.float64)
    if cls == 4:  # diagonal stripes, period 6
        return (((px + py) // 3) % 2 == 0).astype(np.float64)
    raise ValueError(f"at most 5 classes supported, got class {cls}")


def make_toy_dataset(
    root: str | Path,
    n_classes: int = 5,
    per_class: int = 24,
    size: int = 32,
    patch: int = 12,
    seed: int = 0,
) -> tuple[Path, dict[str, list[int]]]:
    """Images with a class-specific textured patch on a zero background.

    The patch location is random per image; its box is the ground-truth
    discriminative region. Returns (manifest path, image path -> [x0, y0, x1, y1]).
    """
    if n_classes > 5:
        raise ValueError("at most 5 classes supported")
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    rows, boxes = [], {}
    margin = 2
    for cls in range(n_classes):
        tile = _texture(cls, patch)
        for i in range(per_class):
            img = np.zeros((size, size), dtype=np.float64)
            x0 = int(rng.integers(margin, size - patch - margin + 1))
            y0 = int(rng.integers(margin, size - patch - margin + 1))
            img[y0 : y0 + patch, x0 : x0 + patch] = tile
            path = root / f"class{cls}_{i:03d}.png"
            Image.fromarray((img * 255).astype(np.uint8)).save(path)
            rows.append(
                ManifestRow(
                    path=str(path), eye_id=f"eye{cls}", channel="R",
                    session="synthetic", pmi_days=0,
                )
            )
            boxes[str(path)] = [x0, y0, x0 + patch, y0 + patch]
    manifest_path = root / "manifest.csv"
    save_manifest(rows, manifest_path)
    (root / "patches.json").write_text(json.dumps(boxes))
    return manifest_path, boxes


def _features(arr: np.ndarray) -> np.ndarray:
    """Location-invariant texture statistics: mean, mean |dx|, mean |dy|."""
    return np.array(
        [arr.mean(), np.abs(np.diff(arr, axis=1)).mean(), np.abs(np.diff(arr, axis=0)).mean()]
    )


def nearest_mean_accuracy(manifest_path: str | Path) -> float:
    """Sanity oracle: nearest class mean over simple texture statistics."""
    from .data import load_manifest

    rows = load_manifest(manifest_path)
    feats, per_class = [], {}
    for r in rows:
        arr = np.asarray(Image.open(r.path), dtype=np.float64) / 255.0
        f = _features(arr)
        feats.append((r.eye_id, f))
        per_class.setdefault(r.eye_id, []).append(f)
    centroids = {eye: np.mean(v, axis=0) for eye, v in per_class.items()}
    correct = sum(
        min(centroids, key=lambda e: float(np.linalg.norm(centroids[e] - f))) == eye
        for eye, f in feats
    )
    return correct / len(feats)
