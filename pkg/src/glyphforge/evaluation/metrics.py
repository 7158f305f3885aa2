"""Recognition metrics over a manifest split."""

from dataclasses import dataclass

import numpy as np

from ..dataset import DatasetManifest, load_png
from ..errors import EmptySplit


@dataclass
class Metrics:
    accuracy: float
    confusion: np.ndarray  # (C, C), rows = truth
    per_class_recall: np.ndarray
    n_evaluated: int

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "confusion": self.confusion.tolist(),
            "per_class_recall": self.per_class_recall.tolist(),
            "n_evaluated": self.n_evaluated,
        }

    @property
    def accuracy_percent(self) -> str:
        return f"{self.accuracy * 100:.2f}"


def evaluate(predict_fn, data: DatasetManifest, split: str = "test") -> Metrics:
    """Single deterministic pass of predict_fn over the split.

    predict_fn maps an image array to a class index in the manifest's
    class order.
    """
    samples = [s for s in data.subset(split) if s.labeled]
    if not samples:
        raise EmptySplit(f"split {split!r} has no labeled samples")
    c = len(data.classes)
    confusion = np.zeros((c, c), dtype=np.int64)
    for s in samples:
        truth = data.class_index(s.character)
        pred = int(predict_fn(load_png(data.resolve(s))))
        confusion[truth, pred] += 1
    n = int(confusion.sum())
    row_totals = confusion.sum(axis=1)
    with np.errstate(invalid="ignore"):
        recalls = np.where(row_totals > 0, np.diag(confusion) / np.maximum(row_totals, 1), 0.0)
    return Metrics(
        accuracy=float(np.trace(confusion) / n),
        confusion=confusion,
        per_class_recall=recalls.astype(np.float64),
        n_evaluated=n,
    )
