"""Recognition metrics: accuracy, ROC/EER from softmax scores, ensembles, PMI buckets."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ContractError, IncompleteGroupError

GENUINE = "genuine"
IMPOSTOR = "impostor"

ROW_SUM_TOL = 1e-6


@dataclass(frozen=True)
class ScoreMatrix:
    """Per-test-sample softmax vectors with true labels and split assignments."""

    scores: np.ndarray  # (rows, classes)
    labels: np.ndarray  # (rows,)
    splits: np.ndarray  # (rows,)

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        splits = np.asarray(self.splits, dtype=np.int64)
        if scores.ndim != 2 or scores.shape[0] < 1:
            raise ContractError("score matrix must be nonempty and 2-D")
        if scores.shape[1] < 2:
            raise ContractError("score matrix needs at least 2 classes")
        if labels.shape != (scores.shape[0],) or splits.shape != (scores.shape[0],):
            raise ContractError("labels/splits length must match row count")
        if np.any(labels < 0) or np.any(labels >= scores.shape[1]):
            raise ContractError("label out of class range")
        if np.any(np.abs(scores.sum(axis=1) - 1.0) > ROW_SUM_TOL):
            raise ContractError("softmax rows must sum to 1")
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "splits", splits)

    @property
    def n_classes(self) -> int:
        return self.scores.shape[1]


@dataclass(frozen=True)
class RocCurve:
    """Threshold sweep (FMR, FNMR) with the interpolated equal error rate."""

    thresholds: np.ndarray
    fmr: np.ndarray
    fnmr: np.ndarray
    eer: float
    auc: float


@dataclass(frozen=True)
class DecisionRecord:
    """One genuine/impostor verdict on an iris pair, by a machine or a human."""

    pair_id: str
    source: str  # "machine" or "human:<subject id>"
    verdict: str
    ground_truth: str
    pmi_days: int
    elapsed_ms: float = 0.0

    def __post_init__(self):
        if self.verdict not in (GENUINE, IMPOSTOR):
            raise ContractError(f"verdict must be genuine/impostor, got {self.verdict!r}")
        if self.ground_truth not in (GENUINE, IMPOSTOR):
            raise ContractError(f"ground truth must be genuine/impostor, got {self.ground_truth!r}")
        if self.pmi_days < 0:
            raise ContractError("pmi_days must be nonnegative")

    @property
    def correct(self) -> bool:
        return self.verdict == self.ground_truth


def load_score_matrix(raw: str | Path) -> ScoreMatrix:
    """Load a ScoreMatrix file: JSON with `classes`, `splits`, and `rows`."""
    if isinstance(raw, Path):
        raw = raw.read_text()
    doc = json.loads(raw)
    rows = doc["rows"]
    classes = int(doc["classes"])
    scores = np.array([r["softmax"] for r in rows], dtype=np.float64)
    if scores.shape[1] != classes:
        raise ContractError(
            f"declared {classes} classes but rows carry {scores.shape[1]} entries"
        )
    return ScoreMatrix(
        scores=scores,
        labels=np.array([r["label"] for r in rows]),
        splits=np.array([r["split"] for r in rows]),
    )


def save_score_matrix(m: ScoreMatrix, path: str | Path | None = None) -> str:
    doc = {
        "classes": m.n_classes,
        "splits": int(m.splits.max()) + 1 if len(m.splits) else 0,
        "rows": [
            {
                "softmax": [float(v) for v in m.scores[i]],
                "label": int(m.labels[i]),
                "split": int(m.splits[i]),
            }
            for i in range(m.scores.shape[0])
        ],
    }
    text = json.dumps(doc)
    if path is not None:
        Path(path).write_text(text)
    return text


def load_decision_log(raw: str | Path) -> list[DecisionRecord]:
    """Load a decision log: one JSON record per line."""
    if isinstance(raw, Path):
        raw = raw.read_text()
    records = []
    for line in raw.splitlines():
        line = line.strip()
        if not line:
            continue
        doc = json.loads(line)
        records.append(
            DecisionRecord(
                pair_id=doc["pair_id"],
                source=doc["source"],
                verdict=doc["verdict"],
                ground_truth=doc["ground_truth"],
                pmi_days=int(doc["pmi_days"]),
                elapsed_ms=float(doc.get("elapsed_ms", 0.0)),
            )
        )
    return records


def classification_accuracy(m: ScoreMatrix) -> tuple[dict[int, float], float]:
    """Per-split fraction of rows whose argmax matches the label, plus the mean.

    Argmax ties break toward the lowest class index (numpy argmax semantics).
    Splits with no rows are excluded from the mean with a warning.
    """
    predictions = np.argmax(m.scores, axis=1)
    per_split: dict[int, float] = {}
    for split in sorted(set(int(s) for s in m.splits)):
        mask = m.splits == split
        if not mask.any():
            warnings.warn(f"split {split} has no rows; excluded from mean")
            continue
        per_split[split] = float((predictions[mask] == m.labels[mask]).mean())
    mean = float(np.mean(list(per_split.values())))
    return per_split, mean


def scores_to_comparisons(m: ScoreMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Split softmax entries into genuine (true-class) and impostor (all other) scores."""
    rows = np.arange(m.scores.shape[0])
    genuine = m.scores[rows, m.labels]
    mask = np.ones_like(m.scores, dtype=bool)
    mask[rows, m.labels] = False
    impostor = m.scores[mask]
    return genuine, impostor


def roc_eer(genuine: Sequence[float], impostor: Sequence[float]) -> RocCurve:
    """ROC sweep over the union of observed scores, with interpolated EER.

    FMR(t) = fraction of impostor scores >= t; FNMR(t) = fraction of genuine
    scores < t. The EER is linearly interpolated between the two sweep points
    bracketing the FMR/FNMR crossing, parameterized in rate space so the
    result is invariant under strictly increasing score transforms.
    """
    gen = np.asarray(genuine, dtype=np.float64)
    imp = np.asarray(impostor, dtype=np.float64)
    if gen.size == 0 or imp.size == 0:
        raise ContractError("both score lists must be nonempty")

    thresholds = np.unique(np.concatenate([gen, imp]))
    gen_sorted = np.sort(gen)
    imp_sorted = np.sort(imp)
    # counts at each threshold via binary search on the sorted score lists
    fmr = 1.0 - np.searchsorted(imp_sorted, thresholds, side="left") / imp.size
    fnmr = np.searchsorted(gen_sorted, thresholds, side="left") / gen.size

    # sentinel endpoints guarantee the crossing is bracketed
    fmr_ext = np.concatenate([[1.0], fmr, [0.0]])
    fnmr_ext = np.concatenate([[0.0], fnmr, [1.0]])
    diff = fnmr_ext - fmr_ext
    k = int(np.argmax(diff >= 0))  # first index at/after the crossing
    if k == 0:
        eer = float(fmr_ext[0])
    else:
        f1, f2 = fmr_ext[k - 1], fmr_ext[k]
        n1, n2 = fnmr_ext[k - 1], fnmr_ext[k]
        denom = (n2 - n1) - (f2 - f1)
        s = 0.0 if denom == 0 else (f1 - n1) / denom
        eer = float(f1 + s * (f2 - f1))

    # AUC of TPR vs FMR; fmr_ext descends along the sweep
    tpr = 1.0 - fnmr_ext
    auc = float(np.trapezoid(tpr[::-1], fmr_ext[::-1]))
    return RocCurve(thresholds=thresholds, fmr=fmr, fnmr=fnmr, eer=eer, auc=auc)


def ensemble_or(
    records: Iterable[DecisionRecord], members: Sequence[str]
) -> dict[str, tuple[str, str]]:
    """OR-rule ensemble: a pair is called genuine if any selected member says genuine.

    Returns pair_id -> (ensemble verdict, ground truth). Every selected pair
    must carry a verdict from each selected member.
    """
    members = list(members)
    by_pair: dict[str, dict[str, DecisionRecord]] = {}
    for rec in records:
        if rec.source in members:
            by_pair.setdefault(rec.pair_id, {})[rec.source] = rec

    missing = sorted(
        pair for pair, votes in by_pair.items() if any(m not in votes for m in members)
    )
    if missing:
        raise IncompleteGroupError(missing)

    out: dict[str, tuple[str, str]] = {}
    for pair, votes in by_pair.items():
        verdict = GENUINE if any(votes[m].verdict == GENUINE for m in members) else IMPOSTOR
        out[pair] = (verdict, votes[members[0]].ground_truth)
    return out


def accuracy_of(verdicts: Mapping[str, tuple[str, str]]) -> float:
    """Fraction of (verdict, ground truth) pairs that agree."""
    if not verdicts:
        raise ContractError("no verdicts to score")
    return sum(v == g for v, g in verdicts.values()) / len(verdicts)


def accuracy_by_pmi(
    records: Iterable[DecisionRecord], bucket_edges: Sequence[int]
) -> dict[str, dict[str, tuple[int, float]]]:
    """Accuracy per PMI bucket per source.

    `bucket_edges` are ascending day thresholds; buckets are [0, e1), [e1, e2),
    ..., [eN, inf). Returns source -> bucket label -> (count, accuracy); empty
    buckets are absent.
    """
    edges = sorted(bucket_edges)
    lows = [0] + edges
    highs = edges + [None]

    def bucket_of(days: int) -> str:
        for lo, hi in zip(lows, highs):
            if hi is None or days < hi:
                if days >= lo:
                    return f"[{lo},{hi})" if hi is not None else f"[{lo},inf)"
        raise AssertionError("unreachable")

    tallies: dict[str, dict[str, list[int]]] = {}
    for rec in records:
        cell = tallies.setdefault(rec.source, {}).setdefault(bucket_of(rec.pmi_days), [0, 0])
        cell[0] += 1
        cell[1] += int(rec.correct)

    return {
        source: {label: (n, hits / n) for label, (n, hits) in buckets.items()}
        for source, buckets in tallies.items()
    }
