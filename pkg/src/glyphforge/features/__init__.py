from .gabor import (
    DEFAULT_ORIENTATIONS,
    DEFAULT_WAVELENGTHS,
    GaborParams,
    default_gabor_bank,
    gabor_bank,
    gabor_kernel,
)
from .lbp import (
    LbpParams,
    code_map,
    lbp_code_at,
    lbp_dimension,
    lbp_histogram,
    neighbor_offsets,
    uniform_table,
)
from .lgbp import (
    FeatureVector,
    convolve_reflect,
    descriptor_id,
    lgbp_descriptor,
    lgbp_dimension,
    magnitude_map,
)

__all__ = [
    "DEFAULT_ORIENTATIONS",
    "DEFAULT_WAVELENGTHS",
    "FeatureVector",
    "GaborParams",
    "LbpParams",
    "code_map",
    "convolve_reflect",
    "default_gabor_bank",
    "descriptor_id",
    "gabor_bank",
    "gabor_kernel",
    "lbp_code_at",
    "lbp_dimension",
    "lbp_histogram",
    "lgbp_descriptor",
    "lgbp_dimension",
    "magnitude_map",
    "neighbor_offsets",
    "uniform_table",
]
