"""Procedural glyph dataset synthesis.

The real corpus is not redistributable, so desk-scale experiments run on
procedural stand-ins: each class is a prototype of 3-7 random polyline
strokes (2-4 px wide, ink on white) and every sample is a mild random
perturbation of its prototype. Stroke-like structure exercises binary
patterns and convolutions much like real glyphs.
"""

from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from .augment import AugmentSpec, augment
from .images import save_png
from .index import AnnotationIndex
from .manifest import DatasetManifest, Sample, build_manifest, save_manifest

# flips are disabled: glyphs are chiral, a mirrored prototype is a different shape
PERTURB_SPEC = AugmentSpec(
    horizontal_flip=0.0,
    rotation_max=10.0,
    translation_max=0.06,
    scale_range=(0.9, 1.1),
    brightness_range=(0.85, 1.15),
    contrast_range=(0.85, 1.15),
)

_SUPERSAMPLE = 2


def _render_prototype(size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw one glyph prototype: random polyline strokes on white ground."""
    big = size * _SUPERSAMPLE
    margin = big // 8
    im = Image.new("L", (big, big), color=255)
    draw = ImageDraw.Draw(im)
    n_strokes = int(rng.integers(3, 8))
    for _ in range(n_strokes):
        n_pts = int(rng.integers(2, 5))
        pts = [
            (float(rng.uniform(margin, big - margin)), float(rng.uniform(margin, big - margin)))
            for _ in range(n_pts)
        ]
        width = int(rng.integers(2, 5)) * _SUPERSAMPLE
        draw.line(pts, fill=0, width=width, joint="curve")
    im = im.resize((size, size), resample=Image.BILINEAR)
    return np.asarray(im, dtype=np.float64) / 255.0


def generate_synthetic(
    classes: int, per_class: int, size: int, seed: int, out_dir
) -> DatasetManifest:
    """Render a labeled synthetic dataset under out_dir and return its manifest.

    Sample 0 of each class is the unperturbed prototype (handwritten
    serial 0); the rest are perturbations. Identical arguments reproduce
    byte-identical image files and manifest.
    """
    if classes < 2:
        raise ValueError("need at least 2 classes")
    if per_class < 1:
        raise ValueError("need at least 1 sample per class")
    out_dir = Path(out_dir)

    prototypes = []
    for c in range(classes):
        attempt = 0
        while True:
            rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0, c, attempt)))
            proto = _render_prototype(size, rng)
            if all(np.abs(proto - other).sum() > 0 for other in prototypes):
                break
            attempt += 1  # pixel-identical collision: redraw from a fresh substream
        prototypes.append(proto)

    samples = []
    for c, proto in enumerate(prototypes):
        character = chr(0x4E00 + c)  # distinct CJK ideographs as labels
        for k in range(per_class):
            if k == 0:
                img = proto
            else:
                rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1, c, k)))
                img = augment(proto, PERTURB_SPEC, rng)
            rel = f"images/c{c:03d}_s{k:03d}.png"
            save_png(img, out_dir / rel)
            samples.append(
                Sample(
                    id=f"c{c:03d}_s{k:03d}",
                    image_path=rel,
                    index=AnnotationIndex(c + 1, 1, 1, k),
                    character=character,
                )
            )

    manifest = build_manifest(out_dir, samples)
    save_manifest(manifest, out_dir / "manifest.jsonl")
    return manifest
