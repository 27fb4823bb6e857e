"""Classifier backbones and training configuration."""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn


@dataclass
class TrainingConfig:
    epochs: int = 30
    momentum: float = 0.9
    learning_rate: float = 1e-4
    batch_size: int = 16
    train_frac: float = 0.8
    n_splits: int = 10
    n_classes: int = 71
    mode: str = "mixed"  # NIR | R | mixed
    backbone: str = "vgg16"
    pretrained: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.train_frac < 1:
            raise ValueError("train_frac must be in (0, 1)")
        if self.n_classes < 2:
            raise ValueError("need at least 2 classes")
        if self.mode not in ("NIR", "R", "mixed"):
            raise ValueError(f"unknown mode {self.mode!r}")


class TinyGapNet(nn.Module):
    """Small fully-convolutional classifier: 3 conv stages, GAP, linear head.

    Conv biases are off so empty background stays inactive; the last conv
    stage is the activation-map target layer.
    """

    input_size = 32
    input_channels = 1

    def __init__(self, n_classes: int):
        super().__init__()
        self.features = nn.Sequential(
            nn.Conv2d(1, 8, 3, padding=1, bias=False),
            nn.ReLU(),
            nn.Conv2d(8, 16, 3, padding=1, bias=False),
            nn.ReLU(),
            nn.MaxPool2d(2),
            nn.Conv2d(16, 32, 3, padding=1, bias=False),
            nn.ReLU(),
        )
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.classifier = nn.Linear(32, n_classes)

    @property
    def target_layer(self) -> nn.Module:
        return self.features[-1]  # ReLU after the final conv stage

    def forward(self, x):
        a = self.features(x)
        return self.classifier(self.pool(a).flatten(1))


class Vgg16Classifier(nn.Module):
    """ImageNet-pretrained VGG-16 with the output layer resized to the eye classes."""

    input_size = 224
    input_channels = 3

    def __init__(self, n_classes: int, pretrained: bool = True):
        super().__init__()
        from torchvision import models

        weights = models.VGG16_Weights.IMAGENET1K_V1 if pretrained else None
        vgg = models.vgg16(weights=weights)
        vgg.classifier[-1] = nn.Linear(vgg.classifier[-1].in_features, n_classes)
        self.net = vgg

    @property
    def target_layer(self) -> nn.Module:
        return self.net.features[-2]  # ReLU closing the final convolutional stage

    def forward(self, x):
        return self.net(x)


def build_model(cfg: TrainingConfig) -> nn.Module:
    if cfg.backbone == "tiny":
        return TinyGapNet(cfg.n_classes)
    if cfg.backbone == "vgg16":
        return Vgg16Classifier(cfg.n_classes, pretrained=cfg.pretrained)
    raise ValueError(f"unknown backbone {cfg.backbone!r}")
