import numpy as np
import pytest

from glyphforge.dataset import AnnotationIndex, Sample, build_manifest, save_png
from glyphforge.errors import EmptySplit
from glyphforge.evaluation import Metrics, evaluate


def labeled_manifest(tmp_path, labels_splits):
    samples = []
    rng = np.random.default_rng(0)
    for i, (ch, split) in enumerate(labels_splits):
        rel = f"m{i}.png"
        img = np.full((8, 8), (i + 1) / (len(labels_splits) + 1))
        save_png(img, tmp_path / rel)
        samples.append(
            Sample(
                id=f"m{i}",
                image_path=rel,
                index=AnnotationIndex(1, i + 1, 1, 0),
                character=ch,
                split=split,
            )
        )
    return build_manifest(tmp_path, samples)


def test_all_correct(tmp_path):
    data = labeled_manifest(tmp_path, [("a", "test"), ("b", "test"), ("a", "test")])
    truth = {0: 0, 1: 1, 2: 0}
    order = iter([0, 1, 0])
    metrics = evaluate(lambda img: next(order), data, "test")
    assert metrics.accuracy == 1.0
    assert np.array_equal(metrics.confusion, np.array([[2, 0], [0, 1]]))
    assert metrics.n_evaluated == 3


def test_two_of_three_correct(tmp_path):
    data = labeled_manifest(tmp_path, [("a", "test"), ("b", "test"), ("a", "test")])
    order = iter([0, 1, 1])  # last one wrong
    metrics = evaluate(lambda img: next(order), data, "test")
    assert metrics.accuracy == pytest.approx(2 / 3, abs=1e-4)
    assert metrics.confusion[0, 1] == 1
    assert metrics.accuracy_percent == "66.67"


def test_recall_accuracy_identity(tmp_path):
    data = labeled_manifest(
        tmp_path,
        [("a", "test"), ("a", "test"), ("b", "test"), ("b", "test"), ("c", "test")],
    )
    preds = iter([0, 1, 1, 0, 2])
    metrics = evaluate(lambda img: next(preds), data, "test")
    counts = metrics.confusion.sum(axis=1)
    reconstructed = float((metrics.per_class_recall * counts).sum() / metrics.n_evaluated)
    assert reconstructed == pytest.approx(metrics.accuracy, abs=1e-12)
    assert (counts == np.array([2, 2, 1])).all()


def test_empty_split_rejected(tmp_path):
    data = labeled_manifest(tmp_path, [("a", "train"), ("b", "train")])
    with pytest.raises(EmptySplit):
        evaluate(lambda img: 0, data, "test")


def test_single_pass_deterministic(tmp_path):
    data = labeled_manifest(tmp_path, [("a", "test"), ("b", "test")])
    calls = []
    def predictor(img):
        calls.append(img.mean())
        return 0
    evaluate(predictor, data, "test")
    first = list(calls)
    calls.clear()
    evaluate(predictor, data, "test")
    assert calls == first
