"""Gradient-weighted class-activation maps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import torch
from torch import nn


@dataclass
class CamResult:
    image_ref: str
    predicted_class: int
    target_class: int
    softmax: np.ndarray
    saliency: np.ndarray  # (h, w), nonnegative, raw (pre-normalization)
    degenerate: bool = False  # all-zero map flagged, never silently normalized


class GradCam:
    """Activation-map generator hooked onto one convolutional stage.

    Channel weights are the spatial averages of the target-class score
    gradients with respect to the stage's activations; the map is the
    rectified weighted sum of those activations.
    """

    def __init__(self, model: nn.Module, target_layer: nn.Module):
        self.model = model
        self._activations: torch.Tensor | None = None
        self._gradients: torch.Tensor | None = None
        self._handles = [
            target_layer.register_forward_hook(self._keep_activations),
            target_layer.register_full_backward_hook(self._keep_gradients),
        ]

    def _keep_activations(self, module, inputs, output):
        self._activations = output.detach()

    def _keep_gradients(self, module, grad_input, grad_output):
        self._gradients = grad_output[0].detach()

    def close(self):
        for h in self._handles:
            h.remove()

    def channel_weights(
        self, image: torch.Tensor, target_class: int | None = None
    ) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, int]:
        """Run forward+backward; returns (weights, activations, logits, target)."""
        self.model.eval()
        self.model.zero_grad(set_to_none=True)
        x = image.unsqueeze(0) if image.dim() == 3 else image
        logits = self.model(x)
        if target_class is None:
            target_class = int(logits.argmax(dim=1).item())
        logits[0, target_class].backward()
        if self._activations is None or self._gradients is None:
            raise RuntimeError("target layer hooks captured nothing")
        weights = self._gradients.mean(dim=(2, 3))[0]
        return weights, self._activations[0], logits.detach()[0], target_class

    def compute(
        self, image: torch.Tensor, image_ref: str = "", target_class: int | None = None
    ) -> CamResult:
        weights, activations, logits, target = self.channel_weights(image, target_class)
        cam = torch.relu((weights[:, None, None] * activations).sum(dim=0))
        softmax = torch.softmax(logits, dim=0).numpy()
        saliency = cam.numpy().astype(np.float64)
        return CamResult(
            image_ref=image_ref,
            predicted_class=int(logits.argmax().item()),
            target_class=target,
            softmax=softmax,
            saliency=saliency,
            degenerate=bool(saliency.max() <= 0),
        )
