#!/usr/bin/env python3
"""Build the 5-sample service fixture used by the UI integration test."""

import sys
from pathlib import Path

import numpy as np

from glyphforge.dataset import (
    AnnotationIndex,
    Sample,
    build_manifest,
    save_manifest,
    save_png,
)


def main(out_dir: str) -> None:
    root = Path(out_dir)
    rng = np.random.default_rng(7)
    chars = ["敢", "宗", "敢", "", ""]
    samples = []
    for i, ch in enumerate(chars):
        rel = f"images/s{i}.png"
        save_png(rng.random((32, 32)), root / rel)
        samples.append(
            Sample(id=f"s{i}", image_path=rel, index=AnnotationIndex(i + 1, 1, 1, 0), character=ch)
        )
    save_manifest(build_manifest(root, samples), root / "manifest.jsonl")
    print(root / "manifest.jsonl")


if __name__ == "__main__":
    main(sys.argv[1])
