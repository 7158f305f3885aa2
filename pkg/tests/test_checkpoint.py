import numpy as np
import pytest

from glyphforge.errors import ChecksumMismatch, VersionMismatch
from glyphforge.nn import (
    ModelConfig,
    TrainConfig,
    checkpoint_kind,
    load_checkpoint,
    predict_proba,
    save_checkpoint,
    train_model,
)
from glyphforge.svm import train_svm, svm_predict
from tests.test_train import tiny_manifest


@pytest.fixture(scope="module")
def trained(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("ckpt_data")
    data = tiny_manifest(tmp)
    cfg_m = ModelConfig("cnn7", num_classes=5, width_scale=0.25)
    return train_model(cfg_m, data, TrainConfig(epochs=3, batch_size=5, seed=0))


def test_roundtrip_bit_identical_params(tmp_path, trained):
    path = tmp_path / "m.ckpt"
    save_checkpoint(trained, path)
    loaded = load_checkpoint(path)
    assert loaded.classes == trained.classes
    assert loaded.config.as_dict() == trained.config.as_dict()
    for name in trained.parameters:
        assert np.array_equal(loaded.parameters[name], trained.parameters[name])


def test_roundtrip_identical_predictions(tmp_path, trained):
    path = tmp_path / "m.ckpt"
    save_checkpoint(trained, path)
    loaded = load_checkpoint(path)
    img = np.random.default_rng(5).random((64, 64))
    assert np.array_equal(predict_proba(trained, img), predict_proba(loaded, img))


def test_truncated_file_is_checksum_error(tmp_path, trained):
    path = tmp_path / "m.ckpt"
    save_checkpoint(trained, path)
    blob = path.read_bytes()
    path.write_bytes(blob[: len(blob) - 9])
    with pytest.raises(ChecksumMismatch):
        load_checkpoint(path)


def test_corrupted_payload_is_checksum_error(tmp_path, trained):
    path = tmp_path / "m.ckpt"
    save_checkpoint(trained, path)
    blob = bytearray(path.read_bytes())
    blob[len(blob) // 2] ^= 0xFF
    path.write_bytes(bytes(blob))
    with pytest.raises(ChecksumMismatch):
        load_checkpoint(path)


def test_wrong_magic_is_version_error(tmp_path, trained):
    path = tmp_path / "m.ckpt"
    save_checkpoint(trained, path)
    blob = bytearray(path.read_bytes())
    blob[:4] = b"NOPE"
    path.write_bytes(bytes(blob))
    with pytest.raises(VersionMismatch):
        load_checkpoint(path)


def test_unsupported_version_rejected(tmp_path, trained):
    path = tmp_path / "m.ckpt"
    save_checkpoint(trained, path)
    blob = bytearray(path.read_bytes())
    blob[4] = 99
    path.write_bytes(bytes(blob))
    with pytest.raises((VersionMismatch, ChecksumMismatch)):
        load_checkpoint(path)


def test_svm_checkpoint_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    x = np.vstack([rng.normal(0, 0.5, (10, 3)), rng.normal(4, 0.5, (10, 3))])
    y = np.array([0] * 10 + [1] * 10)
    model = train_svm(x, y, epochs=10, seed=1)
    path = tmp_path / "svm.ckpt"
    save_checkpoint(model, path)
    assert checkpoint_kind(path) == "svm"
    loaded = load_checkpoint(path)
    assert np.array_equal(loaded.weights, model.weights)
    assert np.array_equal(loaded.biases, model.biases)
    assert loaded.feature_scale == model.feature_scale
    for xi in x[:5]:
        assert svm_predict(loaded, xi)[0] == svm_predict(model, xi)[0]


def test_kind_tag(tmp_path, trained):
    path = tmp_path / "m.ckpt"
    save_checkpoint(trained, path)
    assert checkpoint_kind(path) == "nn"


@pytest.mark.parametrize("arch", ["cnn9", "cnn11", "lenet", "alexnet", "resnet34"])
def test_all_architectures_roundtrip(tmp_path, arch):
    from glyphforge.nn import TrainedModel, build_model

    cfg = ModelConfig(arch, num_classes=4, width_scale=0.25)
    trained = TrainedModel(model=build_model(cfg, seed=3), classes=["a", "b", "c", "d"], history=[])
    path = tmp_path / f"{arch}.ckpt"
    save_checkpoint(trained, path)
    loaded = load_checkpoint(path)
    img = np.random.default_rng(1).random((48, 48))
    assert np.array_equal(predict_proba(trained, img), predict_proba(loaded, img))
