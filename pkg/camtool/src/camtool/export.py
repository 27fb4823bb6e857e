"""Export activation-map grids and a linking manifest for a completed run."""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import load_image_tensor
from .gradcam import GradCam
from .interchange import validate_grid_file, validate_score_file, write_grid
from .model import TrainingConfig, build_model


def export_artifacts(
    run_dir: str | Path,
    split_index: int = 0,
    pair_ids: dict[str, str] | None = None,
) -> dict:
    """Compute one activation grid per test image and write the export manifest.

    `pair_ids` optionally maps image paths to pair identifiers; unmapped
    images fall back to their file stem. Every written file is re-validated;
    any format failure aborts the export.
    """
    run_dir = Path(run_dir)
    meta = json.loads((run_dir / f"run_split{split_index}.json").read_text())
    cfg = TrainingConfig(
        backbone=meta["backbone"],
        mode=meta["mode"],
        n_classes=len(meta["classes"]),
        pretrained=False,
        seed=meta["seed"],
    )
    model = build_model(cfg)
    model.load_state_dict(torch.load(run_dir / meta["model_file"], weights_only=True))
    model.eval()

    cam = GradCam(model, model.target_layer)
    entries = []
    try:
        for idx, rec in enumerate(meta["test_images"]):
            image = load_image_tensor(rec["path"], model.input_size, model.input_channels)
            result = cam.compute(image, image_ref=rec["path"])  # winning class by default
            grid_file = run_dir / f"cam_split{split_index}_{idx:04d}.grid.json"
            write_grid(result.saliency, grid_file)
            validate_grid_file(grid_file)
            entries.append(
                {
                    "image_ref": rec["path"],
                    "pair_id": (pair_ids or {}).get(rec["path"], Path(rec["path"]).stem),
                    "grid_file": grid_file.name,
                    "label": rec["label"],
                    "predicted_class": result.predicted_class,
                    "target_class": result.target_class,
                    "degenerate_map": result.degenerate,
                }
            )
    finally:
        cam.close()

    validate_score_file(run_dir / meta["scores_file"])
    manifest = {
        "split_index": split_index,
        "scores_file": meta["scores_file"],
        "seed": meta["seed"],
        "images": entries,
    }
    manifest_file = run_dir / f"export_split{split_index}.json"
    manifest_file.write_text(json.dumps(manifest, indent=2))
    return manifest
