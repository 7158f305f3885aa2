"""Dataset catalog: samples, labels, splits.

On disk a manifest is UTF-8 JSON-lines: a header line
``{"schema": 1, "root": "."}`` followed by one sample object per line
with fields ``{id, image_path, index, character, split}``. Paths are
relative to the manifest's directory joined with the header root.

Reference corpus note (Houma Alliance Book): the published statistics
are internally inconsistent -- 297 classes with both 3,547 and 3,574 as
reported sample totals, and a 2,658/776 train/test split that sums to
neither. Splits here are therefore seeded and fractional rather than
fixed-count. The published class-imbalance profile, for comparison with
class_histogram output on real data: about 90.5% of the 297 classes
have at most 20 samples and 188 of them fewer than 5.
"""

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..errors import (
    DuplicateId,
    ManifestParseError,
    MissingImage,
    UnlabeledSamplePresent,
)
from .index import AnnotationIndex, format_index, parse_index

SCHEMA_VERSION = 1
SPLITS = ("train", "test", "unassigned")


@dataclass(frozen=True)
class Sample:
    id: str
    image_path: str
    index: AnnotationIndex
    character: str = ""  # empty means unlabeled
    split: str = "unassigned"

    @property
    def labeled(self) -> bool:
        return self.character != ""


@dataclass
class DatasetManifest:
    root: Path
    samples: list = field(default_factory=list)
    classes: list = field(default_factory=list)  # label order defines class indices

    def class_index(self, character: str) -> int:
        return self.classes.index(character)

    def resolve(self, sample: Sample) -> Path:
        return Path(self.root) / sample.image_path

    def subset(self, split: str) -> list:
        return [s for s in self.samples if s.split == split]

    def by_id(self, sample_id: str):
        for s in self.samples:
            if s.id == sample_id:
                return s
        return None


def _intern_classes(samples) -> list:
    classes = []
    seen = set()
    for s in samples:
        if s.character and s.character not in seen:
            seen.add(s.character)
            classes.append(s.character)
    return classes


def build_manifest(root, samples) -> DatasetManifest:
    """Assemble a manifest in memory; class order is first appearance."""
    return DatasetManifest(root=Path(root), samples=list(samples), classes=_intern_classes(samples))


def load_manifest(path, check_images: bool = True) -> DatasetManifest:
    """Load and validate a JSON-lines manifest file."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ManifestParseError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise ManifestParseError("empty manifest", line=1)

    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ManifestParseError(f"bad header JSON: {exc}", line=1) from exc
    if not isinstance(header, dict) or "schema" not in header:
        raise ManifestParseError("header must be an object with a 'schema' field", line=1)
    if header["schema"] != SCHEMA_VERSION:
        raise ManifestParseError(f"unsupported schema {header['schema']}", line=1)
    root = (path.parent / header.get("root", ".")).resolve()

    samples = []
    ids = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ManifestParseError(f"bad sample JSON: {exc}", line=lineno) from exc
        try:
            sample = Sample(
                id=str(obj["id"]),
                image_path=str(obj["image_path"]),
                index=parse_index(obj["index"]),
                character=str(obj.get("character", "")),
                split=str(obj.get("split", "unassigned")),
            )
        except KeyError as exc:
            raise ManifestParseError(f"missing field {exc}", line=lineno) from exc
        if sample.split not in SPLITS:
            raise ManifestParseError(f"unknown split {sample.split!r}", line=lineno)
        if sample.id in ids:
            raise DuplicateId(f"duplicate sample id {sample.id!r} at line {lineno}")
        ids.add(sample.id)
        if check_images and not (root / sample.image_path).is_file():
            raise MissingImage(f"{sample.image_path} (line {lineno}) not found under {root}")
        samples.append(sample)

    return DatasetManifest(root=root, samples=samples, classes=_intern_classes(samples))


def manifest_to_jsonl(manifest: DatasetManifest) -> str:
    lines = [json.dumps({"schema": SCHEMA_VERSION, "root": "."}, ensure_ascii=False)]
    for s in manifest.samples:
        lines.append(
            json.dumps(
                {
                    "id": s.id,
                    "image_path": s.image_path,
                    "index": format_index(s.index),
                    "character": s.character,
                    "split": s.split,
                },
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + "\n"


def save_manifest(manifest: DatasetManifest, path) -> None:
    """Write JSON-lines; reloading reproduces sample and class order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest_to_jsonl(manifest), encoding="utf-8")


def stratified_split(
    manifest: DatasetManifest, test_fraction: float, seed: int
) -> DatasetManifest:
    """Assign train/test per class, shuffled by a seeded generator.

    Each class with >= 2 samples contributes at least one sample to each
    side; the per-class test count is the rounded fraction, so the
    overall test share lands within one sample per class of the target.
    Classes with a single sample go to train.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    unlabeled = [s.id for s in manifest.samples if not s.labeled]
    if unlabeled:
        raise UnlabeledSamplePresent(f"{len(unlabeled)} unlabeled samples, e.g. {unlabeled[0]!r}")

    rng = np.random.default_rng(seed)
    assignment = {}
    for character in manifest.classes:
        members = [i for i, s in enumerate(manifest.samples) if s.character == character]
        order = rng.permutation(len(members))
        n = len(members)
        if n == 1:
            n_test = 0
        else:
            n_test = int(np.floor(test_fraction * n + 0.5))
            n_test = min(max(n_test, 1), n - 1)
        for rank, pos in enumerate(order):
            assignment[members[pos]] = "test" if rank < n_test else "train"

    new_samples = [replace(s, split=assignment[i]) for i, s in enumerate(manifest.samples)]
    return DatasetManifest(root=manifest.root, samples=new_samples, classes=list(manifest.classes))


@dataclass(frozen=True)
class HistogramBin:
    lo: int
    hi: int
    count: int

    @property
    def label(self) -> str:
        return f"{self.lo}-{self.hi}"


@dataclass(frozen=True)
class ClassHistogram:
    bins: tuple
    total_classes: int
    classes_le20_fraction: float
    classes_lt5: int

    def as_dict(self) -> dict:
        return {
            "bins": [{"label": b.label, "lo": b.lo, "hi": b.hi, "count": b.count} for b in self.bins],
            "total_classes": self.total_classes,
            "classes_le20_fraction": self.classes_le20_fraction,
            "classes_lt5": self.classes_lt5,
        }


def class_histogram(manifest: DatasetManifest, bin_width: int = 5) -> ClassHistogram:
    """Bin classes by sample count in ranges [1-5], [6-10], ...; empty bins
    are omitted. Also reports the share of classes with <= 20 samples and
    the number with < 5."""
    counts = {}
    for s in manifest.samples:
        if s.labeled:
            counts[s.character] = counts.get(s.character, 0) + 1
    if not counts:
        return ClassHistogram(bins=(), total_classes=0, classes_le20_fraction=0.0, classes_lt5=0)

    per_bin = {}
    for n in counts.values():
        b = (n - 1) // bin_width
        per_bin[b] = per_bin.get(b, 0) + 1
    bins = tuple(
        HistogramBin(lo=b * bin_width + 1, hi=(b + 1) * bin_width, count=per_bin[b])
        for b in sorted(per_bin)
    )
    total = len(counts)
    le20 = sum(1 for n in counts.values() if n <= 20)
    lt5 = sum(1 for n in counts.values() if n < 5)
    return ClassHistogram(
        bins=bins,
        total_classes=total,
        classes_le20_fraction=le20 / total,
        classes_lt5=lt5,
    )
