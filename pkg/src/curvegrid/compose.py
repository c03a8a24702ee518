"""Deterministic grid transforms: bias composition, lattice misalignment,
and synthetic grid generators.

``compose_base`` folds a low-resolution image into a grid as per-cell biases
on the diagonal curves, so a grid of learned deltas plus a reconstructed
base image forms the complete translator.  ``misalign`` shifts the lattice
relative to the raster (replicate-pad then random crop), decorrelating grid
cells from pixels.  ``synth_grid`` builds closed-form grids for tests and
demos.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ChannelMismatchError, ConfigError, ShapeError
from .image import Image
from .lattice import CurveGrid, TranslatorConfig

__all__ = [
    "TranslatorConfig",
    "SEPIA_MATRIX",
    "compose_base",
    "misalign",
    "synth_grid",
]

# rows = output channel q, columns = input channel p
SEPIA_MATRIX = np.array(
    [
        [0.393, 0.769, 0.189],
        [0.349, 0.686, 0.168],
        [0.272, 0.534, 0.131],
    ]
)

_MASK64 = (1 << 64) - 1


def compose_base(delta: CurveGrid, base: Image) -> CurveGrid:
    """Add a base image's pixel values as biases onto the diagonal curves.

    Cell (i, j)'s curve p->p gets base[i][j][p] added to all of its knots;
    cross-channel curves are untouched.  The base must be 3-channel at
    exactly the grid's lattice resolution.
    """
    if delta.n_curves != 9:
        raise ConfigError(f"base composition needs a 9-curve grid, got {delta.n_curves}")
    if base.channels != 3:
        raise ChannelMismatchError(f"base image must have 3 channels, got {base.channels}")
    if (base.height, base.width) != (delta.grid_h, delta.grid_w):
        raise ShapeError(
            f"base image {base.height}x{base.width} does not match "
            f"lattice {delta.grid_h}x{delta.grid_w}"
        )
    if base.c_max != delta.c_max:
        raise ConfigError(f"c_max mismatch: grid has {delta.c_max}, base has {base.c_max}")
    knots = delta.knots.copy()
    knots[:, :, (0, 4, 8), :] += base.data.astype(np.float32)[:, :, :, np.newaxis]
    return CurveGrid(knots, delta.c_max)


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31), state


def misalign(grid: CurveGrid, pad: int, seed: int) -> CurveGrid:
    """Shift the lattice by a random offset: replicate-pad by ``pad`` cells
    per side, then crop a window of the original size.

    The row and column offsets are drawn uniformly from [0, 2*pad] by a
    splitmix64 stream seeded with ``seed`` (row first), so results are
    reproducible across runs and platforms.  pad = 0 is the identity.
    """
    if pad < 0:
        raise ConfigError(f"pad must be >= 0, got {pad}")
    if pad == 0:
        return grid
    span = 2 * pad + 1
    r, state = _splitmix64(seed & _MASK64)
    dy = r % span
    r, _ = _splitmix64(state)
    dx = r % span
    padded = np.pad(grid.knots, ((pad, pad), (pad, pad), (0, 0), (0, 0)), mode="edge")
    window = padded[dy : dy + grid.grid_h, dx : dx + grid.grid_w]
    return CurveGrid(window.copy(), grid.c_max)


def synth_grid(
    kind: str,
    grid_h: int,
    grid_w: int,
    m: int,
    c_max: float = 1.0,
    *,
    gamma: float | None = None,
    gamma_left: float | None = None,
    gamma_right: float | None = None,
) -> CurveGrid:
    """Build a closed-form 9-curve grid.

    Kinds:
      identity        diagonal identity curves, zero off-diagonal
      gamma           diagonal knots c_max * (k/(m-1))**gamma
      sepia           the fixed sepia matrix as 9 linear curves
      spatial_gamma   gamma varying linearly from gamma_left at lattice
                      column 0 to gamma_right at the last column

    All kinds need m >= 2: a single constant knot cannot encode a ramp.
    """
    if grid_h < 1 or grid_w < 1:
        raise ConfigError(f"grid dims must be >= 1, got {grid_h}x{grid_w}")
    if m < 2:
        raise ConfigError(f"kind {kind!r} needs m >= 2 knots, got {m}")
    if not (math.isfinite(c_max) and c_max > 0):
        raise ConfigError(f"c_max must be finite and > 0, got {c_max}")

    ramp = np.arange(m, dtype=np.float64) / (m - 1)
    knots = np.zeros((grid_h, grid_w, 9, m))

    if kind == "identity":
        knots[:, :, (0, 4, 8), :] = c_max * ramp
    elif kind == "gamma":
        g = _check_gamma("gamma", gamma)
        knots[:, :, (0, 4, 8), :] = c_max * ramp**g
    elif kind == "sepia":
        for q in range(3):
            for p in range(3):
                knots[:, :, 3 * p + q, :] = SEPIA_MATRIX[q, p] * c_max * ramp
    elif kind == "spatial_gamma":
        g0 = _check_gamma("gamma_left", gamma_left)
        g1 = _check_gamma("gamma_right", gamma_right)
        t = np.zeros(grid_w) if grid_w == 1 else np.arange(grid_w) / (grid_w - 1)
        g_col = g0 + (g1 - g0) * t
        curves = c_max * ramp[np.newaxis, :] ** g_col[:, np.newaxis]  # (grid_w, m)
        knots[:, :, (0, 4, 8), :] = curves[np.newaxis, :, np.newaxis, :]
    else:
        raise ConfigError(
            f"unknown grid kind {kind!r} "
            "(expected identity, gamma, sepia, or spatial_gamma)"
        )
    return CurveGrid(knots, c_max)


def _check_gamma(name: str, value: float | None) -> float:
    if value is None:
        raise ConfigError(f"missing required parameter {name}")
    if not (math.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be finite and > 0, got {value}")
    return float(value)
