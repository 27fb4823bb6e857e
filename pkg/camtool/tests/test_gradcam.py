import numpy as np
import pytest
import torch
from torch import nn

from camtool.gradcam import GradCam
from camtool.model import TinyGapNet


@pytest.fixture
def tiny_model():
    torch.manual_seed(0)
    return TinyGapNet(n_classes=4).double()


@pytest.fixture
def image():
    torch.manual_seed(1)
    # GAP head accepts any spatial size; a small input keeps the FD sweep cheap
    return torch.rand(1, 16, 16, dtype=torch.float64)


def split_at_target(model):
    """Features up to (and including) the target layer, and the remaining head."""
    def head(activations):
        return model.classifier(model.pool(activations).flatten(1))
    return model.features, head


def test_channel_weights_match_finite_differences(tiny_model, image):
    features, head = split_at_target(tiny_model)
    cam = GradCam(tiny_model, tiny_model.target_layer)
    try:
        weights, activations, logits, target = cam.channel_weights(image)
    finally:
        cam.close()

    a0 = activations.unsqueeze(0).clone()
    n_ch, h, w = activations.shape
    eps = 1e-6
    fd_weights = torch.zeros(n_ch, dtype=torch.float64)
    with torch.no_grad():
        for c in range(n_ch):
            grad_sum = 0.0
            for i in range(h):
                for j in range(w):
                    plus = a0.clone()
                    plus[0, c, i, j] += eps
                    minus = a0.clone()
                    minus[0, c, i, j] -= eps
                    grad_sum += (
                        head(plus)[0, target] - head(minus)[0, target]
                    ).item() / (2 * eps)
            fd_weights[c] = grad_sum / (h * w)

    denom = torch.norm(fd_weights)
    assert denom > 0
    assert torch.norm(weights - fd_weights) / denom < 1e-4


def test_map_is_nonnegative(tiny_model, image):
    cam = GradCam(tiny_model, tiny_model.target_layer)
    try:
        result = cam.compute(image)
    finally:
        cam.close()
    assert np.all(result.saliency >= 0)
    assert abs(result.softmax.sum() - 1.0) < 1e-6


def test_map_invariant_to_constant_logit_shift(tiny_model, image):
    cam = GradCam(tiny_model, tiny_model.target_layer)
    try:
        base = cam.compute(image, target_class=2)
    finally:
        cam.close()

    class Shifted(nn.Module):
        def __init__(self, inner):
            super().__init__()
            self.inner = inner
            self.features = inner.features
            self.pool = inner.pool
            self.classifier = inner.classifier

        @property
        def target_layer(self):
            return self.inner.target_layer

        def forward(self, x):
            return self.inner(x) + 5.0  # constant shift of every logit

    shifted = Shifted(tiny_model)
    cam2 = GradCam(shifted, shifted.target_layer)
    try:
        moved = cam2.compute(image, target_class=2)
    finally:
        cam2.close()
    assert np.max(np.abs(base.saliency - moved.saliency)) < 1e-12


def test_single_channel_positive_weight_is_proportional_to_activation():
    class OneChannel(nn.Module):
        def __init__(self):
            super().__init__()
            self.features = nn.Sequential(nn.Conv2d(1, 1, 3, padding=1, bias=False), nn.ReLU())
            self.pool = nn.AdaptiveAvgPool2d(1)
            self.classifier = nn.Linear(1, 2)

        @property
        def target_layer(self):
            return self.features[-1]

        def forward(self, x):
            return self.classifier(self.pool(self.features(x)).flatten(1))

    torch.manual_seed(3)
    model = OneChannel().double()
    with torch.no_grad():
        model.classifier.weight[0, 0] = 1.5  # force a positive class-0 weight
    x = torch.rand(1, 8, 8, dtype=torch.float64)
    cam = GradCam(model, model.target_layer)
    try:
        weights, activations, _, _ = cam.channel_weights(x, target_class=0)
        result = cam.compute(x, target_class=0)
    finally:
        cam.close()
    expected = (weights[0] * activations[0]).clamp(min=0).numpy()
    assert np.allclose(result.saliency, expected)
    # positive weight: map proportional to the single activation channel
    act = activations[0].numpy()
    assert np.allclose(result.saliency, float(weights[0]) * act)


def test_degenerate_map_flagged():
    class Dead(nn.Module):
        def __init__(self):
            super().__init__()
            self.features = nn.Sequential(nn.Conv2d(1, 2, 3, padding=1, bias=False), nn.ReLU())
            self.pool = nn.AdaptiveAvgPool2d(1)
            self.classifier = nn.Linear(2, 2)

        @property
        def target_layer(self):
            return self.features[-1]

        def forward(self, x):
            return self.classifier(self.pool(self.features(x)).flatten(1))

    model = Dead().double()
    x = torch.zeros(1, 8, 8, dtype=torch.float64)  # zero input, bias-free: dead activations
    cam = GradCam(model, model.target_layer)
    try:
        result = cam.compute(x, target_class=0)
    finally:
        cam.close()
    assert result.degenerate
    assert result.saliency.max() == 0
