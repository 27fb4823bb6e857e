"""Eye-tracker log parsing, fixation detection, clustering and human attention maps.

The pipeline is: raw gaze CSV -> GazeSample stream -> fixation events
(dispersion-threshold segmentation) -> either density clusters for reporting,
or a duration-weighted Gaussian attention map (a probability grid over the
displayed iris image).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.ndimage import gaussian_filter
from sklearn.base import BaseEstimator
from sklearn.cluster import DBSCAN

from .errors import EmptyMapError, GazeOrderingError, GazeParseError
from .saliency import SaliencyGrid

DEFAULT_DISPERSION_PX = 40.0
DEFAULT_MIN_DURATION_MS = 100.0
DEFAULT_CLUSTER_RADIUS_PX = 50.0
DEFAULT_MIN_MEMBERS = 2
DEFAULT_CIRCLE_RADIUS_PX = 60.0
DEFAULT_SIGMA_SCREEN_PX = 20.0


@dataclass(frozen=True)
class GazeSample:
    """One tracker reading: time (ms since session start), screen position, confidence flag."""

    t: float
    x: float
    y: float
    valid: bool


@dataclass(frozen=True)
class FixationEvent:
    """A dwell period: gaze stayed within the dispersion bound for at least the minimum duration."""

    t_start: float
    t_end: float
    cx: float
    cy: float
    dispersion: float
    sample_count: int

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class FixationCluster:
    """A salient image region: a dense group of fixation centroids in image coordinates."""

    cx: float
    cy: float
    radius: float
    member_count: int
    total_duration: float


@dataclass(frozen=True)
class ScreenToImageTransform:
    """Affine placement of a displayed image on the screen.

    Screen position (x, y) maps to image pixel ((x - offset_x) / scale,
    (y - offset_y) / scale); the displayed rectangle covers [0, W) x [0, H)
    in image coordinates.
    """

    offset_x: float
    offset_y: float
    scale: float
    width: int
    height: int

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")

    def to_image(self, x: float, y: float) -> tuple[float, float]:
        return (x - self.offset_x) / self.scale, (y - self.offset_y) / self.scale

    def to_screen(self, u: float, v: float) -> tuple[float, float]:
        return u * self.scale + self.offset_x, v * self.scale + self.offset_y

    def contains(self, u: float, v: float) -> bool:
        return 0 <= u < self.width and 0 <= v < self.height


def parse_transform(text: str) -> ScreenToImageTransform:
    """Parse a key-value transform descriptor (one `key = value` or `key: value` per line)."""
    fields: dict[str, float] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        sep = "=" if "=" in line else ":"
        if sep not in line:
            raise ValueError(f"malformed transform line: {line!r}")
        key, value = line.split(sep, 1)
        fields[key.strip().lower()] = float(value.strip())
    try:
        return ScreenToImageTransform(
            offset_x=fields["offset_x"],
            offset_y=fields["offset_y"],
            scale=fields["scale"],
            width=int(fields["width"]),
            height=int(fields["height"]),
        )
    except KeyError as exc:
        raise ValueError(f"transform descriptor missing field {exc.args[0]!r}") from None


def parse_gaze_log(raw: str | Iterable[str]) -> list[GazeSample]:
    """Parse a gaze CSV (columns t_ms,x,y,valid; header optional).

    Raises GazeParseError naming the offending line, GazeOrderingError on a
    time regression between consecutive rows. Rows flagged invalid are kept
    with valid=False.
    """
    if isinstance(raw, str):
        lines = io.StringIO(raw)
    else:
        lines = iter(raw)

    samples: list[GazeSample] = []
    prev_t = None
    for line_no, raw_line in enumerate(lines, start=1):
        line = raw_line.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if line_no == 1 and _looks_like_header(parts):
            continue
        if len(parts) != 4:
            raise GazeParseError(line_no, f"expected 4 columns, got {len(parts)}")
        try:
            t = float(parts[0])
            x = float(parts[1])
            y = float(parts[2])
        except ValueError:
            raise GazeParseError(line_no, f"non-numeric field in row {line!r}") from None
        if parts[3] not in ("0", "1"):
            raise GazeParseError(line_no, f"valid flag must be 0 or 1, got {parts[3]!r}")
        if t < 0:
            raise GazeParseError(line_no, f"negative timestamp {t}")
        if prev_t is not None and t < prev_t:
            raise GazeOrderingError(line_no, f"timestamp {t} regresses below {prev_t}")
        prev_t = t
        samples.append(GazeSample(t=t, x=x, y=y, valid=parts[3] == "1"))
    return samples


def _looks_like_header(parts: list[str]) -> bool:
    if not parts:
        return False
    try:
        float(parts[0])
        return False
    except ValueError:
        return True


def _window_dispersion(xs: np.ndarray, ys: np.ndarray) -> float:
    return float((xs.max() - xs.min()) + (ys.max() - ys.min()))


def detect_fixations(
    samples: Sequence[GazeSample],
    dispersion_px: float = DEFAULT_DISPERSION_PX,
    min_duration_ms: float = DEFAULT_MIN_DURATION_MS,
) -> list[FixationEvent]:
    """Dispersion-threshold (I-DT) segmentation of a gaze trace into fixations.

    A window of consecutive valid samples becomes a fixation when its span
    max(x)-min(x) + max(y)-min(y) stays within `dispersion_px` while covering
    at least `min_duration_ms`; each emitted window is maximal. Everything
    else is treated as saccade and dropped.
    """
    valid = [s for s in samples if s.valid]
    n = len(valid)
    if n < 2:
        return []
    t = np.array([s.t for s in valid])
    x = np.array([s.x for s in valid])
    y = np.array([s.y for s in valid])

    out: list[FixationEvent] = []
    i = 0
    while i < n - 1:
        # smallest window starting at i that covers the minimum duration
        j = i + 1
        while j < n and t[j] - t[i] < min_duration_ms:
            j += 1
        if j >= n:
            break
        if _window_dispersion(x[i : j + 1], y[i : j + 1]) <= dispersion_px:
            while j + 1 < n and _window_dispersion(x[i : j + 2], y[i : j + 2]) <= dispersion_px:
                j += 1
            win = slice(i, j + 1)
            out.append(
                FixationEvent(
                    t_start=float(t[i]),
                    t_end=float(t[j]),
                    cx=float(x[win].mean()),
                    cy=float(y[win].mean()),
                    dispersion=_window_dispersion(x[win], y[win]),
                    sample_count=j - i + 1,
                )
            )
            i = j + 1
        else:
            i += 1
    return out


def cluster_fixations(
    fixations: Sequence[FixationEvent],
    transform: ScreenToImageTransform,
    radius_px: float = DEFAULT_CLUSTER_RADIUS_PX,
    min_members: int = DEFAULT_MIN_MEMBERS,
    circle_radius_px: float = DEFAULT_CIRCLE_RADIUS_PX,
) -> list[FixationCluster]:
    """Density-based clustering of fixation centroids into salient image regions.

    Fixations are mapped into image coordinates first; those landing outside
    the image are excluded. Points not reachable from any dense neighborhood
    are noise and belong to no cluster.
    """
    pts = []
    durations = []
    for f in fixations:
        u, v = transform.to_image(f.cx, f.cy)
        if transform.contains(u, v):
            pts.append((u, v))
            durations.append(f.duration)
    if not pts:
        return []

    coords = np.asarray(pts)
    dur = np.asarray(durations)
    labels = DBSCAN(eps=radius_px, min_samples=min_members).fit_predict(coords)

    clusters = []
    for label in sorted(set(labels)):
        if label < 0:
            continue
        mask = labels == label
        clusters.append(
            FixationCluster(
                cx=float(coords[mask, 0].mean()),
                cy=float(coords[mask, 1].mean()),
                radius=float(circle_radius_px),
                member_count=int(mask.sum()),
                total_duration=float(dur[mask].sum()),
            )
        )
    clusters.sort(key=lambda c: (c.cx, c.cy))
    return clusters


def build_human_map(
    fixations: Sequence[FixationEvent],
    transform: ScreenToImageTransform,
    sigma_screen_px: float = DEFAULT_SIGMA_SCREEN_PX,
) -> SaliencyGrid:
    """Duration-weighted Gaussian attention map over the image raster.

    Each in-image fixation deposits mass proportional to its duration at its
    centroid (bilinear splat); the field is smoothed with an isotropic
    Gaussian of `sigma_screen_px / scale` image pixels, truncated at the
    image border, and renormalized to sum to 1.
    """
    if sigma_screen_px <= 0:
        raise ValueError("sigma must be positive")
    w, h = transform.width, transform.height
    grid = np.zeros((h, w), dtype=np.float64)
    deposited = False
    for f in fixations:
        u, v = transform.to_image(f.cx, f.cy)
        if not transform.contains(u, v):
            continue
        deposited = True
        _splat_bilinear(grid, u, v, max(f.duration, 0.0))
    if not deposited or grid.sum() <= 0:
        raise EmptyMapError("no fixation with positive weight maps inside the image")

    sigma_img = sigma_screen_px / transform.scale
    smoothed = gaussian_filter(grid, sigma=sigma_img, mode="constant", cval=0.0)
    total = smoothed.sum()
    if total <= 0:
        raise EmptyMapError("attention map vanished after smoothing")
    return SaliencyGrid(values=smoothed / total, normalized=True)


def _splat_bilinear(grid: np.ndarray, u: float, v: float, weight: float) -> None:
    h, w = grid.shape
    u0, v0 = int(math.floor(u)), int(math.floor(v))
    fu, fv = u - u0, v - v0
    for du, dv, frac in (
        (0, 0, (1 - fu) * (1 - fv)),
        (1, 0, fu * (1 - fv)),
        (0, 1, (1 - fu) * fv),
        (1, 1, fu * fv),
    ):
        uu, vv = u0 + du, v0 + dv
        if 0 <= uu < w and 0 <= vv < h and frac > 0:
            grid[vv, uu] += weight * frac


class FixationDetector(BaseEstimator):
    """Estimator-style wrapper around `detect_fixations`.

    Stateless; `fit` is a no-op so the detector composes with pipeline
    tooling expecting the fit/transform protocol.
    """

    def __init__(
        self,
        dispersion_px: float = DEFAULT_DISPERSION_PX,
        min_duration_ms: float = DEFAULT_MIN_DURATION_MS,
    ):
        self.dispersion_px = dispersion_px
        self.min_duration_ms = min_duration_ms

    def fit(self, X=None, y=None):
        return self

    def transform(self, samples: Sequence[GazeSample]) -> list[FixationEvent]:
        return detect_fixations(samples, self.dispersion_px, self.min_duration_ms)


class FixationClusterer(BaseEstimator):
    """Estimator-style wrapper around `cluster_fixations`."""

    def __init__(
        self,
        transform_spec: ScreenToImageTransform | None = None,
        radius_px: float = DEFAULT_CLUSTER_RADIUS_PX,
        min_members: int = DEFAULT_MIN_MEMBERS,
        circle_radius_px: float = DEFAULT_CIRCLE_RADIUS_PX,
    ):
        self.transform_spec = transform_spec
        self.radius_px = radius_px
        self.min_members = min_members
        self.circle_radius_px = circle_radius_px

    def fit(self, X=None, y=None):
        return self

    def transform(self, fixations: Sequence[FixationEvent]) -> list[FixationCluster]:
        if self.transform_spec is None:
            raise ValueError("transform_spec is required")
        return cluster_fixations(
            fixations,
            self.transform_spec,
            radius_px=self.radius_px,
            min_members=self.min_members,
            circle_radius_px=self.circle_radius_px,
        )


class AttentionMapper(BaseEstimator):
    """Estimator-style wrapper around `build_human_map`."""

    def __init__(
        self,
        transform_spec: ScreenToImageTransform | None = None,
        sigma_screen_px: float = DEFAULT_SIGMA_SCREEN_PX,
    ):
        self.transform_spec = transform_spec
        self.sigma_screen_px = sigma_screen_px

    def fit(self, X=None, y=None):
        return self

    def transform(self, fixations: Sequence[FixationEvent]) -> SaliencyGrid:
        if self.transform_spec is None:
            raise ValueError("transform_spec is required")
        return build_human_map(fixations, self.transform_spec, self.sigma_screen_px)
