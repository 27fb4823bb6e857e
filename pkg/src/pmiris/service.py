"""Examiner-session service core: pair scheduling, decision recording, log replay.

All durable state lives in one append-only JSONL event log; in-memory session
state is a pure fold over that log, so replaying the log after a crash
reconstructs every session exactly.
"""

from __future__ import annotations

import json
import os
import random
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from .errors import CapacityError, ConflictError, NotFoundError, SequenceError
from .evaluation import GENUINE, IMPOSTOR

DEFAULT_PAIRS_PER_SESSION = 20


@dataclass(frozen=True)
class PairSpec:
    """A scheduled iris-image pair with ground truth and display geometry."""

    pair_id: str
    left_image: str
    right_image: str
    ground_truth: str
    pmi_days: dict[str, int]
    transforms: dict[str, dict[str, float]] = field(default_factory=dict)

    def public_payload(self) -> dict[str, Any]:
        """The wire form served to examiners: everything except ground truth."""
        return {
            "pair_id": self.pair_id,
            "left_image": self.left_image,
            "right_image": self.right_image,
            "pmi_days": dict(self.pmi_days),
            "transforms": {k: dict(v) for k, v in self.transforms.items()},
        }


@dataclass
class SessionState:
    session_id: str
    subject_id: str
    schedule: list[str]
    cursor: int = 0
    decisions: list[dict[str, Any]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.cursor >= len(self.schedule)


def load_pair_pool(path: str | Path) -> list[PairSpec]:
    """Load the pair pool: one JSON PairSpec per line."""
    pool = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        doc = json.loads(line)
        pool.append(
            PairSpec(
                pair_id=doc["pair_id"],
                left_image=doc["left_image"],
                right_image=doc["right_image"],
                ground_truth=doc["ground_truth"],
                pmi_days={k: int(v) for k, v in doc["pmi_days"].items()},
                transforms=doc.get("transforms", {}),
            )
        )
    return pool


class ExperimentStore:
    """Sessions, decisions and their append-only event log.

    Decision writes within a session are serialized; appends are atomic per
    record (single writer lock, flush + fsync before acknowledgement).
    `after_append` is a test seam invoked after the log write and before the
    in-memory state update, used for crash injection.
    """

    def __init__(
        self,
        data_dir: str | Path,
        pool: Optional[list[PairSpec]] = None,
        default_k: int = DEFAULT_PAIRS_PER_SESSION,
    ):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = self.data_dir / "events.log"
        pairs_file = self.data_dir / "pairs.jsonl"
        if pool is None:
            pool = load_pair_pool(pairs_file) if pairs_file.exists() else []
        self.pool = {p.pair_id: p for p in pool}
        self.default_k = default_k
        self.sessions: dict[str, SessionState] = {}
        self._write_lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self.after_append: Optional[Callable[[dict[str, Any]], None]] = None
        self._replay()

    # -- log machinery ------------------------------------------------------

    def _replay(self) -> None:
        if not self.log_path.exists():
            return
        for line in self.log_path.read_text().splitlines():
            line = line.strip()
            if line:
                self._apply(json.loads(line))

    def _append(self, event: dict[str, Any]) -> None:
        record = json.dumps(event, sort_keys=True)
        with self._write_lock:
            with open(self.log_path, "a", encoding="utf-8") as fh:
                fh.write(record + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def _apply(self, event: dict[str, Any]) -> None:
        kind = event["type"]
        if kind == "session_created":
            self.sessions[event["session_id"]] = SessionState(
                session_id=event["session_id"],
                subject_id=event["subject_id"],
                schedule=list(event["schedule"]),
            )
        elif kind == "decision":
            state = self.sessions[event["session_id"]]
            # idempotent: replay may re-apply an event recorded pre-crash
            if any(d["pair_id"] == event["pair_id"] for d in state.decisions):
                return
            state.decisions.append(event)
            state.cursor = len(state.decisions)
        else:
            raise ValueError(f"unknown event type {kind!r}")

    def _session_lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._session_locks.setdefault(session_id, threading.Lock())

    # -- operations ----------------------------------------------------------

    def create_session(
        self,
        subject_id: str,
        k: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> SessionState:
        """Sample a balanced schedule of k pairs and persist the new session."""
        k = self.default_k if k is None else k
        pool = sorted(self.pool.values(), key=lambda p: p.pair_id)
        if len(pool) < k:
            raise CapacityError(f"pool has {len(pool)} pairs, need {k}")
        genuine = [p for p in pool if p.ground_truth == GENUINE]
        impostor = [p for p in pool if p.ground_truth == IMPOSTOR]
        k_gen = k // 2
        k_imp = k - k_gen
        # keep balance within +-1, shifting the odd slot if one side is short
        if len(genuine) < k_gen:
            k_gen, k_imp = len(genuine), k - len(genuine)
        if len(impostor) < k_imp:
            k_imp, k_gen = len(impostor), k - len(impostor)
        if len(genuine) < k_gen or len(impostor) < k_imp or abs(k_gen - k_imp) > 1:
            raise CapacityError(
                f"cannot draw a balanced schedule of {k} from "
                f"{len(genuine)} genuine / {len(impostor)} impostor pairs"
            )
        rng = random.Random(seed)
        chosen = rng.sample(genuine, k_gen) + rng.sample(impostor, k_imp)
        rng.shuffle(chosen)
        # seeded runs get a deterministic id so a whole lifecycle is reproducible
        session_id = uuid.uuid4().hex if seed is None else uuid.UUID(int=rng.getrandbits(128)).hex
        if session_id in self.sessions:
            raise ConflictError(f"session {session_id!r} already exists (reused seed)")
        event = {
            "type": "session_created",
            "ts": time.time(),
            "session_id": session_id,
            "subject_id": subject_id,
            "schedule": [p.pair_id for p in chosen],
            "k": k,
            "seed": seed,
        }
        self._append(event)
        self._apply(event)
        return self.sessions[session_id]

    def get_session(self, session_id: str) -> SessionState:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise NotFoundError(f"unknown session {session_id!r}") from None

    def next_pair(self, session_id: str) -> Optional[PairSpec]:
        """The pair at the cursor, or None when the session is complete. Idempotent."""
        state = self.get_session(session_id)
        if state.complete:
            return None
        return self.pool[state.schedule[state.cursor]]

    def record_decision(
        self,
        session_id: str,
        pair_id: str,
        verdict: str,
        elapsed_ms: float = 0.0,
        pointer_trace: Optional[str] = None,
    ) -> dict[str, Any]:
        """Durably append one verdict for the current pair and advance the cursor."""
        if verdict not in (GENUINE, IMPOSTOR):
            raise SequenceError(f"verdict must be genuine/impostor, got {verdict!r}")
        state = self.get_session(session_id)
        with self._session_lock(session_id):
            if any(d["pair_id"] == pair_id for d in state.decisions):
                raise ConflictError(f"pair {pair_id!r} already answered")
            if state.complete:
                raise SequenceError("session already complete")
            current = state.schedule[state.cursor]
            if pair_id != current:
                raise SequenceError(f"expected pair {current!r}, got {pair_id!r}")
            spec = self.pool[pair_id]
            event = {
                "type": "decision",
                "ts": time.time(),
                "session_id": session_id,
                "pair_id": pair_id,
                "source": f"human:{state.subject_id}",
                "verdict": verdict,
                "ground_truth": spec.ground_truth,
                "pmi_days": max(spec.pmi_days.values(), default=0),
                "elapsed_ms": elapsed_ms,
            }
            if pointer_trace is not None:
                event["pointer_trace"] = pointer_trace
                event["trace_source"] = "pointer"
            self._append(event)
            if self.after_append is not None:
                self.after_append(event)
            self._apply(event)
            return {"recorded": True, "cursor": state.cursor}

    def session_report(self, session_id: str) -> dict[str, Any]:
        """Per-session outcome summary, derived purely from logged decisions."""
        state = self.get_session(session_id)
        answered = state.decisions
        report: dict[str, Any] = {
            "session_id": session_id,
            "subject_id": state.subject_id,
            "answered": len(answered),
            "scheduled": len(state.schedule),
            "pairs": [
                {
                    "pair_id": d["pair_id"],
                    "verdict": d["verdict"],
                    "ground_truth": d["ground_truth"],
                    "correct": d["verdict"] == d["ground_truth"],
                    "elapsed_ms": d["elapsed_ms"],
                }
                for d in answered
            ],
        }
        if answered:
            report["accuracy"] = sum(
                d["verdict"] == d["ground_truth"] for d in answered
            ) / len(answered)
            report["mean_elapsed_ms"] = sum(d["elapsed_ms"] for d in answered) / len(answered)
        return report

    # -- per-pair artifact storage -------------------------------------------

    def _pair_dir(self, pair_id: str) -> Path:
        if pair_id not in self.pool:
            raise NotFoundError(f"unknown pair {pair_id!r}")
        d = self.data_dir / "pairs" / pair_id
        d.mkdir(parents=True, exist_ok=True)
        return d

    def put_grid(self, pair_id: str, name: str, grid_json: str) -> None:
        from .saliency import load_saliency_grid

        load_saliency_grid(grid_json)  # validate before storing
        (self._pair_dir(pair_id) / f"{_safe(name)}.grid.json").write_text(grid_json)

    def get_grid(self, pair_id: str, name: str) -> str:
        path = self._pair_dir(pair_id) / f"{_safe(name)}.grid.json"
        if not path.exists():
            raise NotFoundError(f"no grid {name!r} for pair {pair_id!r}")
        return path.read_text()

    def put_gaze_log(self, pair_id: str, text: str) -> None:
        (self._pair_dir(pair_id) / "gaze.csv").write_text(text)

    def get_gaze_log(self, pair_id: str) -> str:
        path = self._pair_dir(pair_id) / "gaze.csv"
        if not path.exists():
            raise NotFoundError(f"no gaze log for pair {pair_id!r}")
        return path.read_text()

    def pair_overlap(self, pair_id: str) -> dict[str, Any]:
        """Per-side overlap q where both a machine and a human grid are stored."""
        from .saliency import load_saliency_grid, normalize_map, overlap_q, resample_grid

        result: dict[str, Any] = {"pair_id": pair_id}
        values = []
        for side in ("left", "right"):
            try:
                cam = load_saliency_grid(self.get_grid(pair_id, f"{side}_cam"))
                human = load_saliency_grid(self.get_grid(pair_id, f"{side}_human"))
            except NotFoundError:
                result[side] = None
                continue
            cam = resample_grid(cam, human.width, human.height)
            q = overlap_q(normalize_map(cam), normalize_map(human), pair_id).q
            result[side] = q
            values.append(q)
        result["mean"] = sum(values) / len(values) if values else None
        return result


def _safe(name: str) -> str:
    if not name.replace("_", "").replace("-", "").isalnum():
        raise NotFoundError(f"invalid artifact name {name!r}")
    return name
