"""Binary model checkpoints.

Layout: magic ``GLYF`` | version u16 LE | header length u32 LE |
header JSON (UTF-8, canonical key order) | one raw little-endian
float64 C-order blob per array, in header order | CRC32 (u32 LE) over
every preceding byte. The header carries the model kind ("nn" or
"svm"), its config, the class list, and the named array shapes.
"""

import json
import struct
import zlib
from pathlib import Path

import numpy as np

from ..errors import ChecksumMismatch, VersionMismatch
from ..svm import LinearSvmModel
from .model import ModelConfig, build_model
from .train import TrainedModel

MAGIC = b"GLYF"
VERSION = 1


def _pack(kind: str, config: dict, classes: list, arrays: dict, extra: dict | None = None) -> bytes:
    header = {
        "kind": kind,
        "config": config,
        "classes": classes,
        "arrays": [{"name": n, "shape": list(a.shape)} for n, a in arrays.items()],
        "extra": extra or {},
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode()
    out = bytearray()
    out += MAGIC
    out += struct.pack("<H", VERSION)
    out += struct.pack("<I", len(blob))
    out += blob
    for arr in arrays.values():
        out += np.ascontiguousarray(arr, dtype="<f8").tobytes()
    out += struct.pack("<I", zlib.crc32(bytes(out)))
    return bytes(out)


def _unpack(data: bytes):
    if len(data) < 10 or data[:4] != MAGIC:
        raise VersionMismatch("not a glyphforge checkpoint (bad magic)")
    (version,) = struct.unpack_from("<H", data, 4)
    if version != VERSION:
        raise VersionMismatch(f"unsupported checkpoint version {version}")
    if len(data) < 14:
        raise ChecksumMismatch("truncated checkpoint")
    (crc_stored,) = struct.unpack_from("<I", data, len(data) - 4)
    if zlib.crc32(data[:-4]) != crc_stored:
        raise ChecksumMismatch("CRC32 mismatch (file corrupt or truncated)")
    (header_len,) = struct.unpack_from("<I", data, 6)
    header = json.loads(data[10 : 10 + header_len].decode())
    offset = 10 + header_len
    arrays = {}
    for spec in header["arrays"]:
        shape = tuple(spec["shape"])
        count = int(np.prod(shape)) if shape else 1
        arr = np.frombuffer(data, dtype="<f8", count=count, offset=offset).reshape(shape)
        arrays[spec["name"]] = arr.astype(np.float64)
        offset += count * 8
    if offset != len(data) - 4:
        raise ChecksumMismatch("payload length does not match header")
    return header, arrays


def save_checkpoint(trained, path) -> None:
    """Serialize a TrainedModel or LinearSvmModel."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(trained, TrainedModel):
        data = _pack(
            kind="nn",
            config=trained.config.as_dict(),
            classes=trained.classes,
            arrays=trained.model.params,
            extra={"history": trained.history},
        )
    elif isinstance(trained, LinearSvmModel):
        cfg = {k: v for k, v in trained.train_config.items() if k != "history"}
        data = _pack(
            kind="svm",
            config=cfg,
            classes=list(range(trained.num_classes)),
            arrays={"weights": trained.weights, "biases": trained.biases},
            extra={"feature_scale": trained.feature_scale},
        )
    else:
        raise TypeError(f"cannot checkpoint {type(trained).__name__}")
    path.write_bytes(data)


def load_checkpoint(path):
    """Round-trips save_checkpoint: parameters come back bit-identical."""
    data = Path(path).read_bytes()
    header, arrays = _unpack(data)
    if header["kind"] == "nn":
        cfg = ModelConfig(
            arch_id=header["config"]["arch_id"],
            num_classes=header["config"]["num_classes"],
            input_size=header["config"]["input_size"],
            width_scale=header["config"]["width_scale"],
        )
        model = build_model(cfg, seed=0)
        model.set_params(arrays)
        return TrainedModel(model=model, classes=header["classes"], history=header["extra"]["history"])
    if header["kind"] == "svm":
        return LinearSvmModel(
            weights=arrays["weights"],
            biases=arrays["biases"],
            feature_scale=header["extra"]["feature_scale"],
            train_config=header["config"],
        )
    raise VersionMismatch(f"unknown checkpoint kind {header['kind']!r}")


def checkpoint_kind(path) -> str:
    data = Path(path).read_bytes()
    header, _ = _unpack(data)
    return header["kind"]
