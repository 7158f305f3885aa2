import numpy as np
import pytest

from glyphforge.dataset import AnnotationIndex, Sample, build_manifest, save_png


@pytest.fixture
def small_manifest(tmp_path):
    """Five 8x8 samples over two classes, one unlabeled."""
    rng = np.random.default_rng(7)
    samples = []
    chars = ["敢", "宗", "敢", "宗", ""]
    for i, ch in enumerate(chars):
        rel = f"images/s{i}.png"
        save_png(rng.random((8, 8)), tmp_path / rel)
        samples.append(
            Sample(
                id=f"s{i}",
                image_path=rel,
                index=AnnotationIndex(i + 1, 1, 1, 0),
                character=ch,
            )
        )
    return build_manifest(tmp_path, samples)
