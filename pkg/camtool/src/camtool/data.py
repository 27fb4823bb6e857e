"""Dataset manifest handling and image loading."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from PIL import Image

MANIFEST_FIELDS = ["path", "eye_id", "channel", "session", "pmi_days"]


@dataclass(frozen=True)
class ManifestRow:
    path: str
    eye_id: str
    channel: str  # "NIR" or "R"
    session: str
    pmi_days: int


def load_manifest(path: str | Path) -> list[ManifestRow]:
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                ManifestRow(
                    path=rec["path"],
                    eye_id=rec["eye_id"],
                    channel=rec["channel"],
                    session=rec.get("session", ""),
                    pmi_days=int(rec.get("pmi_days", 0)),
                )
            )
    return rows


def save_manifest(rows: list[ManifestRow], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=MANIFEST_FIELDS)
        writer.writeheader()
        for r in rows:
            writer.writerow(
                {
                    "path": r.path,
                    "eye_id": r.eye_id,
                    "channel": r.channel,
                    "session": r.session,
                    "pmi_days": r.pmi_days,
                }
            )


def select_mode(rows: list[ManifestRow], mode: str) -> list[ManifestRow]:
    """Filter the manifest by input-channel mode; 'mixed' pools NIR and R."""
    if mode == "mixed":
        return list(rows)
    if mode not in ("NIR", "R"):
        raise ValueError(f"mode must be NIR, R or mixed, got {mode!r}")
    return [r for r in rows if r.channel == mode]


def load_image_tensor(path: str | Path, size: int, channels: int) -> torch.Tensor:
    """Load an image resized to the backbone input, values in [0, 1].

    Single-channel sources are replicated across channels when the backbone
    expects three.
    """
    img = Image.open(path).convert("L" if channels == 1 else "RGB")
    img = img.resize((size, size), Image.BILINEAR)
    arr = np.asarray(img, dtype=np.float32) / 255.0
    if arr.ndim == 2:
        arr = arr[None, :, :]
        if channels == 3:
            arr = np.repeat(arr, 3, axis=0)
    else:
        arr = arr.transpose(2, 0, 1)
    return torch.from_numpy(arr)


def split_by_class(
    rows: list[ManifestRow], train_frac: float, split_index: int, n_splits: int
) -> tuple[list[ManifestRow], list[ManifestRow], list[str]]:
    """Per-class train/test split for one of the independent splits.

    Classes with fewer than 2 samples cannot be split and are excluded;
    their ids are returned so callers can log the exclusion.
    """
    if not 0 <= split_index < n_splits:
        raise ValueError(f"split index {split_index} outside [0, {n_splits})")
    by_class: dict[str, list[ManifestRow]] = {}
    for r in rows:
        by_class.setdefault(r.eye_id, []).append(r)

    rng = np.random.default_rng(split_index)
    train, test, excluded = [], [], []
    for eye_id in sorted(by_class):
        members = by_class[eye_id]
        if len(members) < 2:
            excluded.append(eye_id)
            continue
        order = rng.permutation(len(members))
        n_train = max(1, min(len(members) - 1, round(train_frac * len(members))))
        train.extend(members[i] for i in order[:n_train])
        test.extend(members[i] for i in order[n_train:])
    return train, test, excluded
