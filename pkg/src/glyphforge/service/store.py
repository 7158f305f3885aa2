"""Mutable manifest store behind the annotation service.

Reads go against the in-memory manifest; every write rewrites the
manifest atomically (temp file + fsync + rename), appends one audit
line, and is serialized through a single lock. Version tokens are
content hashes of the sample record, so they survive process restarts
and any state change invalidates outstanding tokens.
"""

import hashlib
import json
import os
import threading
import time
from dataclasses import replace
from pathlib import Path

from ..dataset import (
    DatasetManifest,
    Sample,
    class_histogram,
    format_index,
    load_manifest,
    parse_index,
)
from ..dataset.manifest import manifest_to_jsonl
from ..errors import ConflictingWrite, UnknownSample


def _do_replace(src, dst):
    os.replace(src, dst)


def atomic_write_text(path: Path, text: str) -> None:
    """Write-temp-then-rename; a crash in between leaves the old file intact."""
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    _do_replace(tmp, path)


def version_token(sample: Sample) -> str:
    blob = json.dumps(
        {
            "id": sample.id,
            "image_path": sample.image_path,
            "index": format_index(sample.index),
            "character": sample.character,
            "split": sample.split,
        },
        sort_keys=True,
        ensure_ascii=False,
    ).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


class ManifestStore:
    def __init__(self, manifest_path):
        self.path = Path(manifest_path)
        self.audit_path = self.path.with_name(self.path.stem + ".audit.jsonl")
        self._lock = threading.Lock()
        self.manifest: DatasetManifest = load_manifest(self.path)

    def reload(self) -> None:
        self.manifest = load_manifest(self.path)

    def get(self, sample_id: str) -> Sample:
        sample = self.manifest.by_id(sample_id)
        if sample is None:
            raise UnknownSample(f"no sample with id {sample_id!r}")
        return sample

    def list_samples(self, character=None, unlabeled=None):
        out = self.manifest.samples
        if character is not None:
            out = [s for s in out if s.character == character]
        if unlabeled is not None:
            out = [s for s in out if s.labeled != unlabeled]
        return out

    def histogram(self):
        return class_histogram(self.manifest)

    def annotate(
        self, sample_id: str, character: str, index_str: str, editor: str, version: str
    ) -> Sample:
        """Apply one labeling update under optimistic concurrency."""
        new_index = parse_index(index_str)
        with self._lock:
            sample = self.get(sample_id)
            current = version_token(sample)
            if version != current:
                raise ConflictingWrite(
                    f"version token {version!r} is stale for sample {sample_id!r}"
                )
            updated = replace(sample, character=character, index=new_index)
            samples = [updated if s.id == sample_id else s for s in self.manifest.samples]
            classes = []
            seen = set()
            for s in samples:
                if s.character and s.character not in seen:
                    seen.add(s.character)
                    classes.append(s.character)
            new_manifest = DatasetManifest(root=self.manifest.root, samples=samples, classes=classes)

            # persist first; memory state only advances if the rename landed
            atomic_write_text(self.path, manifest_to_jsonl(new_manifest))
            self.manifest = new_manifest
            self._append_audit(
                {
                    "sample_id": sample_id,
                    "character": character,
                    "index": index_str,
                    "editor": editor,
                    "old_version": current,
                    "new_version": version_token(updated),
                    "timestamp": time.time(),
                }
            )
            return updated

    def _append_audit(self, entry: dict) -> None:
        with open(self.audit_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
            fh.flush()

    def audit_length(self) -> int:
        if not self.audit_path.exists():
            return 0
        return sum(1 for line in self.audit_path.read_text(encoding="utf-8").splitlines() if line)
