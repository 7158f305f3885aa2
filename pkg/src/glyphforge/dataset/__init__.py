from .augment import IDENTITY_SPEC, AugmentSpec, augment
from .images import affine_warp, load_png, resize_bilinear, save_png, validate_image
from .index import AnnotationIndex, format_index, parse_index
from .manifest import (
    ClassHistogram,
    DatasetManifest,
    HistogramBin,
    Sample,
    build_manifest,
    class_histogram,
    load_manifest,
    save_manifest,
    stratified_split,
)
from .synth import generate_synthetic

__all__ = [
    "AnnotationIndex",
    "AugmentSpec",
    "ClassHistogram",
    "DatasetManifest",
    "HistogramBin",
    "IDENTITY_SPEC",
    "Sample",
    "affine_warp",
    "augment",
    "build_manifest",
    "class_histogram",
    "format_index",
    "generate_synthetic",
    "load_manifest",
    "load_png",
    "parse_index",
    "resize_bilinear",
    "save_manifest",
    "save_png",
    "stratified_split",
    "validate_image",
]
