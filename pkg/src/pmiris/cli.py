"""Command line interface: gaze analysis, map comparison, evaluation, service."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import evaluation, gaze, saliency
from .service import ExperimentStore


@click.group()
def main():
    """Attention-map and recognition-decision analytics for iris comparison."""


# -- gaze ---------------------------------------------------------------------


@main.group("gaze")
def gaze_group():
    """Fixation detection, clustering and human attention maps."""


def _load_fixations(log_path, dispersion, min_dur):
    samples = gaze.parse_gaze_log(Path(log_path).read_text())
    return gaze.detect_fixations(samples, dispersion_px=dispersion, min_duration_ms=min_dur)


@gaze_group.command("fixations")
@click.option("--log", "log_path", required=True, type=click.Path(exists=True))
@click.option("--dispersion", default=gaze.DEFAULT_DISPERSION_PX, show_default=True)
@click.option("--min-dur", default=gaze.DEFAULT_MIN_DURATION_MS, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
def fixations_cmd(log_path, dispersion, min_dur, out_path):
    """Detect fixations in a gaze log; emits one JSON record per fixation."""
    events = _load_fixations(log_path, dispersion, min_dur)
    lines = [
        json.dumps(
            {
                "t_start": f.t_start,
                "t_end": f.t_end,
                "cx": f.cx,
                "cy": f.cy,
                "dispersion": f.dispersion,
                "sample_count": f.sample_count,
            }
        )
        for f in events
    ]
    _emit("\n".join(lines) + ("\n" if lines else ""), out_path)


@gaze_group.command("cluster")
@click.option("--log", "log_path", required=True, type=click.Path(exists=True))
@click.option("--transform", "transform_path", required=True, type=click.Path(exists=True))
@click.option("--dispersion", default=gaze.DEFAULT_DISPERSION_PX, show_default=True)
@click.option("--min-dur", default=gaze.DEFAULT_MIN_DURATION_MS, show_default=True)
@click.option("--radius", default=gaze.DEFAULT_CLUSTER_RADIUS_PX, show_default=True)
@click.option("--min-members", default=gaze.DEFAULT_MIN_MEMBERS, show_default=True)
@click.option("--circle-radius", default=gaze.DEFAULT_CIRCLE_RADIUS_PX, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
def cluster_cmd(log_path, transform_path, dispersion, min_dur, radius, min_members, circle_radius, out_path):
    """Cluster fixations into salient image regions."""
    transform = gaze.parse_transform(Path(transform_path).read_text())
    events = _load_fixations(log_path, dispersion, min_dur)
    clusters = gaze.cluster_fixations(
        events, transform, radius_px=radius, min_members=min_members,
        circle_radius_px=circle_radius,
    )
    lines = [
        json.dumps(
            {
                "cx": c.cx,
                "cy": c.cy,
                "radius": c.radius,
                "member_count": c.member_count,
                "total_duration": c.total_duration,
            }
        )
        for c in clusters
    ]
    _emit("\n".join(lines) + ("\n" if lines else ""), out_path)


@gaze_group.command("humanmap")
@click.option("--log", "log_path", required=True, type=click.Path(exists=True))
@click.option("--transform", "transform_path", required=True, type=click.Path(exists=True))
@click.option("--sigma", default=gaze.DEFAULT_SIGMA_SCREEN_PX, show_default=True)
@click.option("--dispersion", default=gaze.DEFAULT_DISPERSION_PX, show_default=True)
@click.option("--min-dur", default=gaze.DEFAULT_MIN_DURATION_MS, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def humanmap_cmd(log_path, transform_path, sigma, dispersion, min_dur, out_path):
    """Build the probability-normalized human attention map from a gaze log."""
    transform = gaze.parse_transform(Path(transform_path).read_text())
    events = _load_fixations(log_path, dispersion, min_dur)
    grid = gaze.build_human_map(events, transform, sigma_screen_px=sigma)
    saliency.save_saliency_grid(grid, out_path)
    click.echo(f"wrote {out_path}")


# -- compare ------------------------------------------------------------------


@main.group("compare")
def compare_group():
    """Overlap between machine and human attention maps."""


def _load_pair(cam_path, human_path):
    cam = saliency.load_saliency_grid(Path(cam_path))
    human = saliency.load_saliency_grid(Path(human_path))
    if (cam.width, cam.height) != (human.width, human.height):
        cam = saliency.resample_grid(cam, human.width, human.height)
    return saliency.normalize_map(cam), saliency.normalize_map(human)


@compare_group.command("q")
@click.option("--cam", "cam_path", required=True, type=click.Path(exists=True))
@click.option("--human", "human_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path(), default=None)
def q_cmd(cam_path, human_path, out_path):
    """Overlap score q between a machine map and a human map."""
    pc, pe = _load_pair(cam_path, human_path)
    report = saliency.overlap_q(pc, pe)
    _emit(json.dumps({"q": report.q}) + "\n", out_path)


@compare_group.command("agreement")
@click.option("--cam", "cam_path", required=True, type=click.Path(exists=True))
@click.option("--human", "human_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def agreement_cmd(cam_path, human_path, out_path):
    """Per-pixel agreement map sqrt(pc * pe)."""
    pc, pe = _load_pair(cam_path, human_path)
    report = saliency.overlap_q(pc, pe)
    saliency.save_saliency_grid(report.agreement, out_path)
    click.echo(f"q={report.q:.6f} wrote {out_path}")


# -- eval ---------------------------------------------------------------------


@main.group("eval")
def eval_group():
    """Recognition metrics over score files and decision logs."""


@eval_group.command("acc")
@click.option("--scores", "scores_path", required=True, type=click.Path(exists=True))
def acc_cmd(scores_path):
    """Per-split classification accuracy and its mean."""
    m = evaluation.load_score_matrix(Path(scores_path))
    per_split, mean = evaluation.classification_accuracy(m)
    click.echo(json.dumps({"per_split": per_split, "mean": mean}))


@eval_group.command("roc")
@click.option("--scores", "scores_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--pool/--per-split", "pooled", default=True,
              help="Pool scores across splits, or emit one curve per split.")
def roc_cmd(scores_path, out_path, pooled):
    """ROC curve(s) and EER from softmax scores."""
    m = evaluation.load_score_matrix(Path(scores_path))

    def curve_doc(matrix):
        gen, imp = evaluation.scores_to_comparisons(matrix)
        c = evaluation.roc_eer(gen, imp)
        return {
            "thresholds": c.thresholds.tolist(),
            "fmr": c.fmr.tolist(),
            "fnmr": c.fnmr.tolist(),
            "eer": c.eer,
            "auc": c.auc,
        }

    if pooled:
        doc = {"mode": "pooled", "curve": curve_doc(m)}
    else:
        doc = {"mode": "per_split", "curves": {}}
        for split in sorted(set(int(s) for s in m.splits)):
            mask = m.splits == split
            sub = evaluation.ScoreMatrix(
                scores=m.scores[mask], labels=m.labels[mask], splits=m.splits[mask]
            )
            doc["curves"][str(split)] = curve_doc(sub)
    Path(out_path).write_text(json.dumps(doc))
    click.echo(f"wrote {out_path}")


@eval_group.command("ensemble")
@click.option("--log", "log_path", required=True, type=click.Path(exists=True))
@click.option("--members", required=True, help="Comma-separated source ids.")
def ensemble_cmd(log_path, members):
    """OR-rule ensemble accuracy over a decision log."""
    records = evaluation.load_decision_log(Path(log_path))
    verdicts = evaluation.ensemble_or(records, members.split(","))
    click.echo(json.dumps({
        "pairs": {p: {"verdict": v, "ground_truth": g} for p, (v, g) in sorted(verdicts.items())},
        "accuracy": evaluation.accuracy_of(verdicts),
    }))


@eval_group.command("pmi")
@click.option("--log", "log_path", required=True, type=click.Path(exists=True))
@click.option("--buckets", required=True, help="Comma-separated day thresholds, e.g. 2,7,14,30.")
def pmi_cmd(log_path, buckets):
    """Accuracy bucketed by post-mortem interval, per source."""
    records = evaluation.load_decision_log(Path(log_path))
    edges = [int(b) for b in buckets.split(",")]
    table = evaluation.accuracy_by_pmi(records, edges)
    doc = {
        src: {label: {"count": n, "accuracy": acc} for label, (n, acc) in bucketsd.items()}
        for src, bucketsd in table.items()
    }
    click.echo(json.dumps(doc))


# -- serve ----------------------------------------------------------------------


@main.command("serve")
@click.option("--data", "data_dir", required=True, type=click.Path())
@click.option("--listen", default="127.0.0.1:8000", show_default=True)
@click.option("--k", default=None, type=int, help="Default pairs per session.")
def serve_cmd(data_dir, listen, k):
    """Run the examiner-session service."""
    import uvicorn

    from .app import create_app

    kwargs = {} if k is None else {"default_k": k}
    store = ExperimentStore(data_dir, **kwargs)
    host, _, port = listen.partition(":")
    uvicorn.run(create_app(store), host=host or "127.0.0.1", port=int(port or 8000))


def _emit(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text)
        click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
