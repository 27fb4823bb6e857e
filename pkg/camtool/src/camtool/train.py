"""Fine-tuning a classifier on manifest data and exporting per-split scores."""

from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np
import torch
from torch import nn
from torch.utils.data import DataLoader, TensorDataset

from .data import ManifestRow, load_image_tensor, select_mode, split_by_class
from .interchange import validate_score_file, write_score_matrix
from .model import TrainingConfig, build_model

log = logging.getLogger(__name__)


def fine_tune(
    manifest: list[ManifestRow],
    cfg: TrainingConfig,
    split_index: int,
    out_dir: str | Path,
) -> dict:
    """Train one train/test split and export its softmax ScoreMatrix.

    Returns the run metadata (also written to run.json): class map, test
    accuracy, excluded classes, test refs, file names.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    torch.manual_seed(cfg.seed + split_index)

    rows = select_mode(manifest, cfg.mode)
    train_rows, test_rows, excluded = split_by_class(
        rows, cfg.train_frac, split_index, cfg.n_splits
    )
    if excluded:
        log.warning("excluding classes with <2 samples in mode %s: %s", cfg.mode, excluded)
    classes = sorted({r.eye_id for r in train_rows})
    label_of = {eye: i for i, eye in enumerate(classes)}
    cfg.n_classes = len(classes)

    model = build_model(cfg)
    size, channels = model.input_size, model.input_channels

    def tensors(rows_):
        xs = torch.stack([load_image_tensor(r.path, size, channels) for r in rows_])
        ys = torch.tensor([label_of[r.eye_id] for r in rows_])
        return xs, ys

    x_train, y_train = tensors(train_rows)
    x_test, y_test = tensors(test_rows)
    loader = DataLoader(
        TensorDataset(x_train, y_train), batch_size=cfg.batch_size, shuffle=True,
        generator=torch.Generator().manual_seed(cfg.seed + split_index),
    )

    optimizer = torch.optim.SGD(
        model.parameters(), lr=cfg.learning_rate, momentum=cfg.momentum
    )
    loss_fn = nn.CrossEntropyLoss()
    model.train()
    for epoch in range(cfg.epochs):
        for xb, yb in loader:
            optimizer.zero_grad(set_to_none=True)
            loss = loss_fn(model(xb), yb)
            loss.backward()
            optimizer.step()

    model.eval()
    with torch.no_grad():
        logits = model(x_test)
        softmax = torch.softmax(logits, dim=1).numpy().astype(np.float64)
        # renormalize away float32 rounding so rows meet the interchange tolerance
        softmax /= softmax.sum(axis=1, keepdims=True)
        accuracy = float((logits.argmax(dim=1) == y_test).float().mean())

    scores_file = out_dir / f"scores_split{split_index}.json"
    write_score_matrix(
        softmax,
        [label_of[r.eye_id] for r in test_rows],
        [split_index] * len(test_rows),
        scores_file,
    )
    validate_score_file(scores_file)
    torch.save(model.state_dict(), out_dir / f"model_split{split_index}.pt")

    meta = {
        "backbone": cfg.backbone,
        "mode": cfg.mode,
        "split_index": split_index,
        "seed": cfg.seed + split_index,
        "epochs": cfg.epochs,
        "learning_rate": cfg.learning_rate,
        "momentum": cfg.momentum,
        "batch_size": cfg.batch_size,
        "classes": classes,
        "excluded_classes": excluded,
        "test_accuracy": accuracy,
        "test_images": [
            {"path": r.path, "eye_id": r.eye_id, "label": label_of[r.eye_id],
             "channel": r.channel, "pmi_days": r.pmi_days}
            for r in test_rows
        ],
        "scores_file": scores_file.name,
        "model_file": f"model_split{split_index}.pt",
    }
    (out_dir / f"run_split{split_index}.json").write_text(json.dumps(meta, indent=2))
    return meta
