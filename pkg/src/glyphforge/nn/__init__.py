from .checkpoint import checkpoint_kind, load_checkpoint, save_checkpoint
from .layers import (
    Conv2d,
    Dense,
    Dropout,
    Flatten,
    MaxPool2d,
    MeanPool2d,
    ReLU,
    ResidualBlock,
)
from .model import ARCH_IDS, Model, ModelConfig, build_model
from .optim import AdamState, adam_step
from .train import (
    TrainConfig,
    TrainedModel,
    cross_entropy,
    predict_proba,
    predict_proba_batch,
    softmax,
    train_model,
)

__all__ = [
    "ARCH_IDS",
    "AdamState",
    "Conv2d",
    "Dense",
    "Dropout",
    "Flatten",
    "MaxPool2d",
    "MeanPool2d",
    "Model",
    "ModelConfig",
    "ReLU",
    "ResidualBlock",
    "TrainConfig",
    "TrainedModel",
    "adam_step",
    "build_model",
    "checkpoint_kind",
    "cross_entropy",
    "load_checkpoint",
    "predict_proba",
    "predict_proba_batch",
    "save_checkpoint",
    "softmax",
    "train_model",
]
