import random

import pytest

from pmiris.gaze import GazeSample, ScreenToImageTransform
from pmiris.service import PairSpec


def make_planted_trace(
    rng: random.Random,
    n_fixations: int = 3,
    fixation_ms: float = 400.0,
    jitter_px: float = 5.0,
    sample_dt_ms: float = 20.0,
    sweep_step_px: float = 300.0,
):
    """Synthetic gaze trace: planted fixations joined by fast saccade sweeps.

    Sweep steps are far larger than any sane dispersion bound, so no window
    overlapping a sweep can qualify as a fixation. Returns (samples, planted)
    where planted is a list of (cx, cy) centers in order.
    """
    centers = []
    x, y = rng.uniform(100, 300), rng.uniform(100, 300)
    for _ in range(n_fixations):
        centers.append((x, y))
        x += rng.uniform(500, 800)
        y += rng.uniform(-200, 200)

    samples = []
    t = 0.0
    for idx, (cx, cy) in enumerate(centers):
        n = int(fixation_ms / sample_dt_ms) + 1
        for _ in range(n):
            samples.append(
                GazeSample(
                    t=t,
                    x=cx + rng.uniform(-jitter_px, jitter_px),
                    y=cy + rng.uniform(-jitter_px, jitter_px),
                    valid=True,
                )
            )
            t += sample_dt_ms
        if idx + 1 < len(centers):
            nx, ny = centers[idx + 1]
            sx, sy = cx, cy
            steps = 3
            for s in range(1, steps):
                frac = s / steps
                samples.append(
                    GazeSample(
                        t=t,
                        x=sx + (nx - sx) * frac + rng.uniform(-sweep_step_px, sweep_step_px) * 0.1,
                        y=sy + (ny - sy) * frac,
                        valid=True,
                    )
                )
                t += sample_dt_ms
    return samples, centers


@pytest.fixture
def identity_transform():
    return ScreenToImageTransform(offset_x=0, offset_y=0, scale=1.0, width=1920, height=1080)


def make_pool(n_pairs: int = 40) -> list[PairSpec]:
    pool = []
    for i in range(n_pairs):
        truth = "genuine" if i % 2 == 0 else "impostor"
        pool.append(
            PairSpec(
                pair_id=f"pair{i:03d}",
                left_image=f"images/{i:03d}_l.png",
                right_image=f"images/{i:03d}_r.png",
                ground_truth=truth,
                pmi_days={"left": i % 20, "right": i % 20},
                transforms={
                    "left": {"offset_x": 100, "offset_y": 150, "scale": 2.0,
                             "width": 300, "height": 300},
                    "right": {"offset_x": 900, "offset_y": 150, "scale": 2.0,
                              "width": 300, "height": 300},
                },
            )
        )
    return pool
