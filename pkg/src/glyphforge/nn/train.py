"""Training loop: softmax cross-entropy, Adam, seeded shuffling.

Fully deterministic for a fixed seed: the master seed spawns separate
streams for parameter init, per-epoch shuffling, dropout, and
augmentation, so enabling one knob never shifts the draws of another.
"""

from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from ..dataset import AugmentSpec, DatasetManifest, augment, load_png, resize_bilinear
from ..errors import EmptyTrainSet, UnlabeledSamplePresent
from .model import Model, ModelConfig, build_model
from .optim import AdamState, adam_step


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    batch_size: int = 64
    learning_rate: float = 0.001
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0
    augment: AugmentSpec | None = None

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.batch_size < 1 or self.epochs < 0:
            raise ValueError("batch_size >= 1 and epochs >= 0 required")

    def as_dict(self) -> dict:
        d = {
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "adam_beta1": self.adam_beta1,
            "adam_beta2": self.adam_beta2,
            "adam_eps": self.adam_eps,
            "seed": self.seed,
        }
        if self.augment is not None:
            d["augment"] = self.augment.__dict__.copy()
        return d


@dataclass
class TrainedModel:
    model: Model
    classes: list
    history: list  # one {"epoch", "loss", "accuracy"} per epoch

    @property
    def config(self) -> ModelConfig:
        return self.model.config

    @property
    def parameters(self) -> dict:
        return self.model.params


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy(logits: np.ndarray, labels: np.ndarray, eps: float = 1e-12):
    """Mean loss and its gradient w.r.t. the logits."""
    n = logits.shape[0]
    probs = softmax(logits)
    picked = probs[np.arange(n), labels]
    loss = float(-np.log(np.maximum(picked, eps)).mean())
    dlogits = probs.copy()
    dlogits[np.arange(n), labels] -= 1.0
    return loss, dlogits / n, probs


def _load_split(data: DatasetManifest, split: str, input_size: int):
    samples = data.subset(split)
    unlabeled = [s.id for s in samples if not s.labeled]
    if unlabeled:
        raise UnlabeledSamplePresent(
            f"{len(unlabeled)} unlabeled samples in split {split!r}, e.g. {unlabeled[0]!r}"
        )
    images = []
    labels = []
    for s in samples:
        img = load_png(data.resolve(s))
        images.append(img)
        labels.append(data.class_index(s.character))
    return images, np.array(labels, dtype=np.int64)


def _as_batch(images, input_size: int) -> np.ndarray:
    resized = [
        img if img.shape == (input_size, input_size) else resize_bilinear(img, input_size, input_size)
        for img in images
    ]
    return np.stack(resized)[:, np.newaxis, :, :]


def train_model(cfg_m: ModelConfig, data: DatasetManifest, cfg_t: TrainConfig) -> TrainedModel:
    """Train on the manifest's train split; returns model, class list, history."""
    input_size = cfg_m.resolved_input_size
    images, labels = _load_split(data, "train", input_size)
    if not images:
        raise EmptyTrainSet("manifest has no samples in the train split")

    model = build_model(cfg_m, seed=cfg_t.seed)
    shuffle_rng = np.random.default_rng(np.random.SeedSequence(cfg_t.seed, spawn_key=(1,)))
    dropout_rng = np.random.default_rng(np.random.SeedSequence(cfg_t.seed, spawn_key=(2,)))
    augment_rng = np.random.default_rng(np.random.SeedSequence(cfg_t.seed, spawn_key=(3,)))

    if cfg_t.augment is None:
        # static pipeline: resize once up front
        base = _as_batch(images, input_size)
    else:
        base = None

    state = AdamState()
    history = []
    n = len(images)
    step = 0
    # training GEMMs are small; a single BLAS thread leaves both cores to
    # the compiled conv kernels and sidesteps spin-wait contention
    with threadpool_limits(limits=1, user_api="blas"):
        for epoch in range(cfg_t.epochs):
            order = shuffle_rng.permutation(n)
            epoch_loss = 0.0
            epoch_correct = 0
            for start in range(0, n, cfg_t.batch_size):
                idx = order[start : start + cfg_t.batch_size]
                if base is not None:
                    xb = base[idx]
                else:
                    augmented = [augment(images[i], cfg_t.augment, augment_rng) for i in idx]
                    xb = _as_batch(augmented, input_size)
                yb = labels[idx]
                logits, cache = model.forward(xb, training=True, rng=dropout_rng)
                loss, dlogits, probs = cross_entropy(logits, yb)
                grads = model.backward(cache, dlogits)
                step += 1
                adam_step(
                    model.params,
                    grads,
                    state,
                    cfg_t.learning_rate,
                    step,
                    cfg_t.adam_beta1,
                    cfg_t.adam_beta2,
                    cfg_t.adam_eps,
                )
                epoch_loss += loss * len(idx)
                epoch_correct += int((probs.argmax(axis=1) == yb).sum())
            history.append(
                {"epoch": epoch + 1, "loss": epoch_loss / n, "accuracy": epoch_correct / n}
            )

    return TrainedModel(model=model, classes=list(data.classes), history=history)


def predict_proba(trained: TrainedModel, img: np.ndarray) -> np.ndarray:
    """Class-probability simplex for one image (resized to the model input)."""
    size = trained.config.resolved_input_size
    batch = _as_batch([img], size)
    logits, _ = trained.model.forward(batch, training=False)
    return softmax(logits)[0]


def predict_proba_batch(trained: TrainedModel, images) -> np.ndarray:
    size = trained.config.resolved_input_size
    batch = _as_batch(list(images), size)
    logits, _ = trained.model.forward(batch, training=False)
    return softmax(logits)
