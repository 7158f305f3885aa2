"""Stochastic photometric/geometric augmentation.

Defaults are mild enough to keep glyphs legible: they jitter pose and
tone without destroying stroke topology. All randomness comes from the
Generator passed per call; the draw order is fixed (flip, angle,
translation x/y, scale, brightness, contrast) so a given generator
state always yields the same augmentation.
"""

from dataclasses import dataclass

import numpy as np

from .images import affine_warp, validate_image


@dataclass(frozen=True)
class AugmentSpec:
    horizontal_flip: float = 0.5
    rotation_max: float = 15.0
    translation_max: float = 0.10
    scale_range: tuple = (0.9, 1.1)
    brightness_range: tuple = (0.8, 1.2)
    contrast_range: tuple = (0.8, 1.2)
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.horizontal_flip <= 1.0:
            raise ValueError("horizontal_flip must be a probability")
        for name in ("scale_range", "brightness_range", "contrast_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is not well-ordered: {(lo, hi)}")
        if self.rotation_max < 0 or self.translation_max < 0:
            raise ValueError("rotation_max and translation_max must be >= 0")


IDENTITY_SPEC = AugmentSpec(
    horizontal_flip=0.0,
    rotation_max=0.0,
    translation_max=0.0,
    scale_range=(1.0, 1.0),
    brightness_range=(1.0, 1.0),
    contrast_range=(1.0, 1.0),
)


def augment(img: np.ndarray, spec: AugmentSpec, draw: np.random.Generator) -> np.ndarray:
    """Apply one random augmentation; dims are preserved, values clamped to [0,1]."""
    validate_image(img)
    h, w = img.shape

    flip = draw.uniform() < spec.horizontal_flip
    angle = draw.uniform(-spec.rotation_max, spec.rotation_max)
    tx = draw.uniform(-spec.translation_max, spec.translation_max) * w
    ty = draw.uniform(-spec.translation_max, spec.translation_max) * h
    scale = draw.uniform(spec.scale_range[0], spec.scale_range[1])
    brightness = draw.uniform(spec.brightness_range[0], spec.brightness_range[1])
    contrast = draw.uniform(spec.contrast_range[0], spec.contrast_range[1])

    out = img
    if flip:
        out = out[:, ::-1]
    if angle != 0.0 or tx != 0.0 or ty != 0.0 or scale != 1.0:
        out = affine_warp(out, angle, scale, tx, ty, fill=1.0)
    # multiplicative brightness, then contrast about mid-gray
    out = out * brightness
    if contrast != 1.0:
        out = (out - 0.5) * contrast + 0.5
    return np.clip(out, 0.0, 1.0)
