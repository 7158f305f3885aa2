"""Experiment orchestration.

A run is fully described by its config; artifacts land under
``<runs_root>/<config-hash>/`` (content-addressed, so a rerun with the
same config overwrites identical files). Methods cover the descriptor
baselines (lbp+svm, lgbp+svm), the six network architectures, and the
DCF-* fusion presets over previously trained checkpoints.

Reference-corpus sole-model training budgets, for documentation and
full-scale runs (desk-scale tests use far fewer epochs): lenet 4000,
alexnet 2000, resnet34 600; members fused at 300 epochs each.
"""

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import _kernels
from ..dataset import load_manifest, load_png
from ..errors import EmptyTrainSet, InvalidConfig, MissingMember
from ..features import (
    LbpParams,
    default_gabor_bank,
    descriptor_id,
    lbp_histogram,
    lgbp_descriptor,
)
from ..fusion import DCF_PRESETS, FusionConfig, ensemble_predict
from ..nn import (
    ARCH_IDS,
    ModelConfig,
    TrainConfig,
    load_checkpoint,
    predict_proba,
    save_checkpoint,
    train_model,
)
from ..svm import svm_predict, train_svm
from .metrics import Metrics, evaluate

REFERENCE_EPOCHS = {"lenet": 4000, "alexnet": 2000, "resnet34": 600, "fusion_members": 300}

SVM_METHODS = ("lbp+svm", "lgbp+svm")


@dataclass(frozen=True)
class ExperimentConfig:
    manifest: str
    method: str
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        known = set(SVM_METHODS) | set(ARCH_IDS) | set(DCF_PRESETS)
        if self.method not in known:
            raise InvalidConfig(f"unknown method {self.method!r}; choose from {sorted(known)}")

    def as_dict(self) -> dict:
        return {
            "manifest": str(self.manifest),
            "method": self.method,
            "seed": self.seed,
            "params": self.params,
        }

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


@dataclass
class ExperimentResult:
    metrics: Metrics
    out_dir: Path
    artifacts: dict


def _lbp_params(params: dict) -> LbpParams:
    grid = params.get("grid", (4, 4))
    if isinstance(grid, str):
        gx, gy = grid.lower().split("x")
        grid = (int(gx), int(gy))
    return LbpParams(
        neighbors=int(params.get("P", 8)),
        radius=float(params.get("R", 1.0)),
        grid=tuple(grid),
    )


def make_descriptor(method: str, params: dict):
    """(image -> feature vector) extractor plus its config fingerprint."""
    lbp = _lbp_params(params)
    if method == "lbp+svm" or method == "lbp":
        fingerprint = descriptor_id(
            {"kind": "lbp", "P": lbp.neighbors, "R": lbp.radius, "grid": list(lbp.grid)}
        )
        return lambda img: lbp_histogram(img, lbp), fingerprint
    if method == "lgbp+svm" or method == "lgbp":
        bank = default_gabor_bank()
        fingerprint = descriptor_id(
            {
                "kind": "lgbp",
                "P": lbp.neighbors,
                "R": lbp.radius,
                "grid": list(lbp.grid),
                "bank": 32,
            }
        )
        return lambda img: lgbp_descriptor(img, bank, lbp), fingerprint
    raise InvalidConfig(f"no descriptor for method {method!r}")


def _train_config(params: dict, seed: int) -> TrainConfig:
    return TrainConfig(
        epochs=int(params.get("epochs", 100)),
        batch_size=int(params.get("batch_size", 64)),
        learning_rate=float(params.get("learning_rate", 0.001)),
        seed=seed,
    )


def run_experiment(cfg: ExperimentConfig, runs_root="runs") -> ExperimentResult:
    """Train (or load), evaluate on the test split, persist artifacts."""
    out_dir = Path(runs_root) / cfg.config_hash
    out_dir.mkdir(parents=True, exist_ok=True)
    data = load_manifest(cfg.manifest)
    log = [f"method={cfg.method} seed={cfg.seed} hash={cfg.config_hash}",
           f"kernel backend: {_kernels.backend_name()}"]
    artifacts = {}

    if cfg.method in ARCH_IDS:
        model_cfg = ModelConfig(
            arch_id=cfg.method,
            num_classes=len(data.classes),
            input_size=cfg.params.get("input_size"),
            width_scale=float(cfg.params.get("width_scale", 1.0)),
        )
        trained = train_model(model_cfg, data, _train_config(cfg.params, cfg.seed))
        ckpt = out_dir / "model.ckpt"
        save_checkpoint(trained, ckpt)
        artifacts["checkpoint"] = ckpt
        log.append(f"trained {cfg.method}: final train loss {trained.history[-1]['loss']:.6f}")
        metrics = evaluate(lambda img: int(np.argmax(predict_proba(trained, img))), data, "test")

    elif cfg.method in SVM_METHODS:
        extract, fingerprint = make_descriptor(cfg.method, cfg.params)
        train_samples = [s for s in data.subset("train") if s.labeled]
        if not train_samples:
            raise EmptyTrainSet("manifest has no labeled samples in the train split")
        feats = [extract(load_png(data.resolve(s))) for s in train_samples]
        labels = [data.class_index(s.character) for s in train_samples]
        model = train_svm(
            feats,
            labels,
            C_reg=float(cfg.params.get("C_reg", 1.0)),
            epochs=int(cfg.params.get("epochs", 50)),
            seed=cfg.seed,
        )
        ckpt = out_dir / "model.ckpt"
        save_checkpoint(model, ckpt)
        artifacts["checkpoint"] = ckpt
        log.append(f"descriptor {fingerprint}: dim {model.dimension}, trained svm")
        metrics = evaluate(lambda img: svm_predict(model, extract(img))[0], data, "test")

    else:  # DCF preset over trained member checkpoints
        roster = DCF_PRESETS[cfg.method]
        member_paths = cfg.params.get("members", {})
        missing = [m for m in roster if m not in member_paths]
        if missing:
            raise MissingMember(f"{cfg.method} needs checkpoints for {missing}")
        members = {}
        for arch in roster:
            path = Path(member_paths[arch])
            if not path.is_file():
                raise MissingMember(f"checkpoint for {arch} not found: {path}")
            members[arch] = load_checkpoint(path)
        fusion_cfg = FusionConfig(
            method=cfg.params.get("fusion_method", "soft_vote"), members=tuple(roster)
        )
        log.append(f"fused {roster} by {fusion_cfg.method}")

        def fused_label(img):
            outputs = {arch: predict_proba(m, img) for arch, m in members.items()}
            return ensemble_predict(fusion_cfg, outputs)[0]

        metrics = evaluate(fused_label, data, "test")

    (out_dir / "metrics.json").write_text(
        json.dumps(
            {"config": cfg.as_dict(), "hash": cfg.config_hash, "metrics": metrics.as_dict()},
            sort_keys=True,
            indent=2,
        )
        + "\n"
    )
    log.append(f"test accuracy: {metrics.accuracy:.6f} over {metrics.n_evaluated}")
    (out_dir / "log.txt").write_text("\n".join(log) + "\n")
    artifacts["metrics"] = out_dir / "metrics.json"
    artifacts["log"] = out_dir / "log.txt"
    return ExperimentResult(metrics=metrics, out_dir=out_dir, artifacts=artifacts)
