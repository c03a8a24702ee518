"""curvegrid: spatially-varying multi-curve color mapping.

A low-resolution lattice of per-channel 1D lookup tables is applied to a
full-resolution image by trilinear slicing, giving high-resolution
image-to-image mappings at a cost dominated by the lattice, not the raster.
"""

from .bench import BenchEntry, BenchReport, bench_grid_build, bench_translate, synthetic_image
from .compose import SEPIA_MATRIX, compose_base, misalign, synth_grid
from .costmodel import (
    ArchSpec,
    LayerSpec,
    MctCost,
    SLICING_MACS_PER_PIXEL,
    cyclegan_resnet9,
    load_arch,
    macs_fcn,
    macs_mct,
    parse_arch,
)
from .curve import Curve1D, eval_curve, lookup_coord
from .errors import (
    ChannelMismatchError,
    ConfigError,
    FormatError,
    ShapeError,
    UnsupportedFormatError,
)
from .image import (
    GRAY_WEIGHTS,
    Image,
    decode_image,
    downsample,
    encode_image,
    match_brightness,
    to_grayscale,
)
from .lattice import (
    CurveGrid,
    TranslatorConfig,
    curve_index,
    lattice_coords,
    load_grid,
    save_grid,
    slice_scalar,
    translate,
)

__version__ = "0.1.0"

__all__ = [
    "ArchSpec",
    "BenchEntry",
    "BenchReport",
    "ChannelMismatchError",
    "ConfigError",
    "Curve1D",
    "CurveGrid",
    "FormatError",
    "GRAY_WEIGHTS",
    "Image",
    "LayerSpec",
    "MctCost",
    "SEPIA_MATRIX",
    "SLICING_MACS_PER_PIXEL",
    "ShapeError",
    "TranslatorConfig",
    "UnsupportedFormatError",
    "bench_grid_build",
    "bench_translate",
    "compose_base",
    "curve_index",
    "cyclegan_resnet9",
    "decode_image",
    "downsample",
    "encode_image",
    "eval_curve",
    "lattice_coords",
    "load_arch",
    "load_grid",
    "lookup_coord",
    "macs_fcn",
    "macs_mct",
    "match_brightness",
    "misalign",
    "parse_arch",
    "save_grid",
    "slice_scalar",
    "synth_grid",
    "synthetic_image",
    "to_grayscale",
    "translate",
]
