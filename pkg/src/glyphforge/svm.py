"""Linear one-vs-rest classifier for descriptor features.

Primal hinge loss with L2 regularization, minimized by seeded
stochastic subgradient descent with the classic 1/(lambda*t) step
(t starts at 2 so the first step does not cancel the iterate).
Epochs that worsen the full-train objective are rolled back while the
step size keeps decaying, so the per-epoch objective sequence is
non-increasing. Deterministic for a fixed seed; the bias stays
unregularized.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, SingleClass


@dataclass
class LinearSvmModel:
    weights: np.ndarray  # (C, D)
    biases: np.ndarray  # (C,)
    feature_scale: float
    train_config: dict = field(default_factory=dict)

    @property
    def num_classes(self) -> int:
        return int(self.weights.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.weights.shape[1])


def _as_matrix(features) -> np.ndarray:
    rows = []
    dim = None
    for f in features:
        v = np.asarray(getattr(f, "values", f), dtype=np.float64)
        if v.ndim != 1:
            raise DimensionMismatch(f"feature vectors must be 1-D, got shape {v.shape}")
        if dim is None:
            dim = v.size
        elif v.size != dim:
            raise DimensionMismatch(f"feature dims differ: {v.size} vs {dim}")
        rows.append(v)
    return np.stack(rows)


def svm_objective(
    weights: np.ndarray, biases: np.ndarray, x: np.ndarray, y_onehot: np.ndarray, lam: float
) -> float:
    """Mean one-vs-rest hinge loss plus the L2 term, summed over classes."""
    scores = x @ weights.T + biases  # (n, C)
    margins = np.maximum(0.0, 1.0 - y_onehot * scores)
    return float(lam / 2.0 * (weights**2).sum() + margins.mean(axis=0).sum())


def train_svm(
    features,
    labels,
    C_reg: float = 1.0,
    epochs: int = 50,
    seed: int = 0,
) -> LinearSvmModel:
    """Fit one binary discriminant per class; returns the joint model.

    Records the per-epoch objective in train_config["history"].
    """
    if C_reg <= 0:
        raise ValueError("C_reg must be positive")
    x = _as_matrix(features)
    y = np.asarray(labels, dtype=np.int64)
    n, d = x.shape
    if y.shape != (n,):
        raise DimensionMismatch(f"{n} feature vectors but {y.size} labels")
    num_classes = int(y.max()) + 1 if y.size else 0
    if len(np.unique(y)) < 2:
        raise SingleClass("training requires at least 2 distinct classes")

    scale = float(np.abs(x).max())
    if scale > 0:
        x = x / scale

    lam = 1.0 / (C_reg * n)
    signs = np.where(np.arange(num_classes)[None, :] == y[:, None], 1.0, -1.0)  # (n, C)

    rng = np.random.default_rng(seed)
    w = np.zeros((num_classes, d))
    b = np.zeros(num_classes)
    history = [svm_objective(w, b, x, signs, lam)]
    t = 2
    for _ in range(epochs):
        w_start, b_start = w.copy(), b.copy()
        for i in rng.permutation(n):
            eta = 1.0 / (lam * t)
            t += 1
            xi = x[i]
            margin = signs[i] * (w @ xi + b)
            violated = margin < 1.0
            w *= 1.0 - eta * lam
            if violated.any():
                w[violated] += (eta * signs[i, violated])[:, None] * xi
                b[violated] += eta * signs[i, violated]
        objective = svm_objective(w, b, x, signs, lam)
        if objective > history[-1]:
            # reject the epoch: keep the better iterate, let the step decay
            w, b = w_start, b_start
            objective = history[-1]
        history.append(objective)

    return LinearSvmModel(
        weights=w,
        biases=b,
        feature_scale=scale,
        train_config={
            "C_reg": C_reg,
            "epochs": epochs,
            "seed": seed,
            "history": history,
        },
    )


def svm_predict(model: LinearSvmModel, f):
    """(argmax label, raw per-class scores); ties go to the lowest class index."""
    v = np.asarray(getattr(f, "values", f), dtype=np.float64)
    if v.shape != (model.dimension,):
        raise DimensionMismatch(f"expected dimension {model.dimension}, got {v.shape}")
    if model.feature_scale > 0:
        v = v / model.feature_scale
    scores = model.weights @ v + model.biases
    return int(np.argmax(scores)), scores
