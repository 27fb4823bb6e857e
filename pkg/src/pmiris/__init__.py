"""Human vs machine attention analytics for iris-pair comparison."""

from .errors import PmirisError
from .gaze import (
    AttentionMapper,
    FixationCluster,
    FixationClusterer,
    FixationDetector,
    FixationEvent,
    GazeSample,
    ScreenToImageTransform,
    build_human_map,
    cluster_fixations,
    detect_fixations,
    parse_gaze_log,
    parse_transform,
)
from .saliency import (
    OverlapReport,
    SaliencyGrid,
    grid_from_image,
    load_saliency_grid,
    normalize_map,
    overlap_q,
    resample_grid,
    save_saliency_grid,
)
from .evaluation import (
    DecisionRecord,
    RocCurve,
    ScoreMatrix,
    accuracy_by_pmi,
    classification_accuracy,
    ensemble_or,
    load_decision_log,
    load_score_matrix,
    roc_eer,
    save_score_matrix,
    scores_to_comparisons,
)
from .service import ExperimentStore, PairSpec, SessionState, load_pair_pool

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
