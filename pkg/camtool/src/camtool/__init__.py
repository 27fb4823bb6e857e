"""Classifier fine-tuning and gradient-weighted activation-map export."""

from .data import ManifestRow, load_manifest, save_manifest
from .gradcam import CamResult, GradCam
from .model import TinyGapNet, TrainingConfig, Vgg16Classifier, build_model

__all__ = [
    "CamResult",
    "GradCam",
    "ManifestRow",
    "TinyGapNet",
    "TrainingConfig",
    "Vgg16Classifier",
    "build_model",
    "load_manifest",
    "save_manifest",
]
__version__ = "0.1.0"
