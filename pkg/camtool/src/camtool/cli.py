"""Command line interface for training and activation-map export."""

from __future__ import annotations

import json
import logging

import click

from .data import load_manifest
from .model import TrainingConfig


@click.group()
def main():
    """Classifier fine-tuning and activation-map export."""
    logging.basicConfig(level=logging.INFO)


@main.command("train")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--mode", default="mixed", type=click.Choice(["NIR", "R", "mixed"]))
@click.option("--split", "split_index", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--backbone", default="vgg16", type=click.Choice(["vgg16", "tiny"]))
@click.option("--epochs", default=30, show_default=True)
@click.option("--lr", default=1e-4, show_default=True)
@click.option("--batch-size", default=16, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--pretrained/--no-pretrained", default=True)
def train_cmd(manifest_path, mode, split_index, out_dir, backbone, epochs, lr,
              batch_size, seed, pretrained):
    """Fine-tune one train/test split and export its score file."""
    from .train import fine_tune

    cfg = TrainingConfig(
        epochs=epochs, learning_rate=lr, batch_size=batch_size, mode=mode,
        backbone=backbone, pretrained=pretrained, seed=seed,
    )
    meta = fine_tune(load_manifest(manifest_path), cfg, split_index, out_dir)
    click.echo(json.dumps({"test_accuracy": meta["test_accuracy"],
                           "scores_file": meta["scores_file"]}))


@main.command("export")
@click.option("--run", "run_dir", required=True, type=click.Path(exists=True))
@click.option("--split", "split_index", default=0, show_default=True)
@click.option("--pairs", "pairs_file", type=click.Path(exists=True), default=None,
              help="JSON map of image path -> pair id.")
def export_cmd(run_dir, split_index, pairs_file):
    """Export activation grids and the linking manifest for a completed run."""
    from .export import export_artifacts

    pair_ids = json.loads(open(pairs_file).read()) if pairs_file else None
    manifest = export_artifacts(run_dir, split_index, pair_ids)
    click.echo(f"exported {len(manifest['images'])} grids")


@main.command("synth")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--classes", default=5, show_default=True)
@click.option("--per-class", default=24, show_default=True)
@click.option("--seed", default=0, show_default=True)
def synth_cmd(out_dir, classes, per_class, seed):
    """Generate the synthetic separable texture dataset."""
    from .synth import make_toy_dataset

    manifest, _ = make_toy_dataset(out_dir, n_classes=classes, per_class=per_class, seed=seed)
    click.echo(f"wrote {manifest}")


if __name__ == "__main__":
    main()
