"""Spatial lattices of curves and the trilinear slicing engine.

A :class:`CurveGrid` holds an ``(grid_h, grid_w)`` lattice of curve sets.
Each cell carries either 9 curves (channel-crossing RGB mode: curve
``3*p + q`` maps input channel ``p`` into output channel ``q``) or 3 curves
(grayscale mode: curve ``q`` maps the single input channel into output
channel ``q``).  Every curve has ``m`` knots over ``[0, c_max]``.

Translating an image queries the lattice at fractional coordinates: pixel
``(i, j)`` with value ``v`` maps to lattice position

    rx = i * (grid_h - 1) / (h - 1)
    ry = j * (grid_w - 1) / (w - 1)
    z  = v * (m - 1) / c_max

and the answer is the trilinear interpolation of the eight surrounding knot
values.  Output channel ``q`` sums the sliced values of the three (or one)
curves feeding it, then is clamped to ``[0, c_max]`` unless disabled.

Grids serialize to the MCPM binary format (little-endian):

    offset  size  field
    0       4     magic "MCPM"
    4       2     version (u16) = 1
    6       2     flags (u16); bit 0 set = 3 curves per cell, clear = 9
    8       4     grid_h (u32)
    12      4     grid_w (u32)
    16      4     m (u32)
    20      4     c_max (f32)
    24      ...   grid_h*grid_w*n_curves*m float32 knots, [i][j][c][k] order

Knots are stored float32 in memory as well, so save/load round-trips are
bit-exact in both directions.  All slicing arithmetic is float64.
"""

from __future__ import annotations

import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ChannelMismatchError, ConfigError, FormatError
from .image import Image

MCPM_MAGIC = b"MCPM"
MCPM_VERSION = 1
_HEADER = struct.Struct("<4sHHIIIf")  # 24 bytes

_TILE_PIXELS = 1 << 17  # rows per worker tile are sized to roughly this many pixels

try:  # optional JIT fast path; the numpy tiled path is the portable fallback
    if os.environ.get("CURVEGRID_NO_NUMBA"):
        raise ImportError
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


@dataclass(frozen=True)
class TranslatorConfig:
    """Knobs for the translation pipeline.

    ``pad`` and ``rng_seed`` drive the lattice misalignment transform (see
    :mod:`curvegrid.compose`); ``clamp_output`` controls the final clamp to
    ``[0, c_max]``.
    """

    c_max: float = 1.0
    clamp_output: bool = True
    pad: int = 0
    rng_seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.c_max) and self.c_max > 0):
            raise ConfigError(f"c_max must be finite and > 0, got {self.c_max}")
        if self.pad < 0:
            raise ConfigError(f"pad must be >= 0, got {self.pad}")
        if not 0 <= self.rng_seed < 2**64:
            raise ConfigError("rng_seed must fit in an unsigned 64-bit integer")


class CurveGrid:
    """Immutable lattice of curve sets, shape (grid_h, grid_w, n_curves, m).

    Knots are stored float32 (the serialized precision).  The constructor
    adopts the buffer and freezes it.
    """

    __slots__ = ("knots", "c_max")

    def __init__(self, knots, c_max: float = 1.0):
        arr = np.ascontiguousarray(knots, dtype=np.float32)
        if arr.ndim != 4:
            raise ConfigError(f"knots must be 4-D [i][j][c][k], got shape {np.shape(knots)}")
        gh, gw, nc, m = arr.shape
        if gh < 1 or gw < 1 or m < 1:
            raise ConfigError(f"grid dims and knot count must be >= 1, got {arr.shape}")
        if nc not in (3, 9):
            raise ConfigError(f"curves per cell must be 3 or 9, got {nc}")
        if not (math.isfinite(c_max) and c_max > 0):
            raise ConfigError(f"c_max must be finite and > 0, got {c_max}")
        if not np.isfinite(arr).all():
            raise ValueError("knot values must be finite")
        arr.setflags(write=False)
        self.knots = arr
        self.c_max = float(c_max)

    @property
    def grid_h(self) -> int:
        return self.knots.shape[0]

    @property
    def grid_w(self) -> int:
        return self.knots.shape[1]

    @property
    def n_curves(self) -> int:
        return self.knots.shape[2]

    @property
    def m(self) -> int:
        return self.knots.shape[3]

    def __repr__(self) -> str:
        return (
            f"CurveGrid({self.grid_h}x{self.grid_w}, n_curves={self.n_curves}, "
            f"m={self.m}, c_max={self.c_max})"
        )


def curve_index(p: int, q: int, n_curves: int = 9) -> int:
    """Index of the curve mapping input channel p to output channel q.

    9-curve mode stores them as c = 3*p + q; 3-curve mode has a single input
    channel, so c = q and p must be 0.
    """
    if n_curves == 9:
        if not (0 <= p < 3 and 0 <= q < 3):
            raise IndexError(f"channel indices must be in [0, 3), got p={p}, q={q}")
        return 3 * p + q
    if n_curves == 3:
        if p != 0 or not 0 <= q < 3:
            raise IndexError(f"3-curve mode requires p=0 and q in [0, 3), got p={p}, q={q}")
        return q
    raise ConfigError(f"curves per cell must be 3 or 9, got {n_curves}")


def lattice_coords(i: int, j: int, h: int, w: int, grid_h: int, grid_w: int) -> tuple[float, float]:
    """Fractional lattice position of pixel (i, j) in an h x w image.

    Corners pin to corners; a 1-pixel axis maps to lattice coordinate 0.
    """
    rx = 0.0 if h == 1 else i * (grid_h - 1) / (h - 1)
    ry = 0.0 if w == 1 else j * (grid_w - 1) / (w - 1)
    return rx, ry


def slice_scalar(grid: CurveGrid, c: int, i: int, j: int, v: float, h: int, w: int) -> float:
    """Trilinearly interpolate curve ``c`` of the lattice at one pixel query.

    The reference scalar form of the slicing operation; `translate` is the
    vectorized equivalent over a whole raster.
    """
    if not 0 <= c < grid.n_curves:
        raise IndexError(f"curve index {c} out of range [0, {grid.n_curves})")
    if not (0 <= i < h and 0 <= j < w):
        raise IndexError(f"pixel ({i}, {j}) outside image {h}x{w}")
    if not math.isfinite(v):
        raise ValueError(f"pixel value must be finite, got {v}")

    rx, ry = lattice_coords(i, j, h, w, grid.grid_h, grid.grid_w)
    x0 = math.floor(rx)
    y0 = math.floor(ry)
    x1 = math.ceil(rx)
    y1 = math.ceil(ry)
    dx = rx - x0
    dy = ry - y0

    m = grid.m
    if m == 1:
        z0 = z1 = 0
        dz = 0.0
    else:
        v = min(max(v, 0.0), grid.c_max)
        z = min(max(v * (m - 1) / grid.c_max, 0.0), float(m - 1))
        z0 = math.floor(z)
        z1 = math.ceil(z)
        dz = z - z0

    cells = grid.knots[(x0, x0, x1, x1), (y0, y1, y0, y1), c].astype(np.float64)
    lo = cells[:, z0]
    hi = cells[:, z1]
    v00, v01, v10, v11 = (1.0 - dz) * lo + dz * hi
    top = (1.0 - dy) * v00 + dy * v01
    bot = (1.0 - dy) * v10 + dy * v11
    return float((1.0 - dx) * top + dx * bot)


# ----------------------------------------------------------------------
# Full-raster translation
# ----------------------------------------------------------------------

def _axis_lattice(n: int, grid_n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-index lattice cell pairs and interpolation weights for one axis."""
    if n == 1:
        pos = np.zeros(1)
    else:
        pos = np.arange(n, dtype=np.float64) * ((grid_n - 1) / (n - 1))
    i0 = np.floor(pos).astype(np.intp)
    frac = pos - i0
    i1 = np.minimum(i0 + 1, grid_n - 1)
    return i0, i1, frac


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        env = os.environ.get("MCT_THREADS")
        if env is not None:
            try:
                workers = int(env)
            except ValueError:
                raise ConfigError(f"MCT_THREADS must be a positive integer, got {env!r}") from None
        else:
            workers = os.cpu_count() or 1
    if workers < 1:
        raise ConfigError(f"worker count must be >= 1, got {workers}")
    return workers


def _translate_rows(
    out: np.ndarray,
    pixels: np.ndarray,
    knots: np.ndarray,
    row_cells: tuple[np.ndarray, np.ndarray, np.ndarray],
    col_cells: tuple[np.ndarray, np.ndarray, np.ndarray],
    c_max: float,
    r0: int,
    r1: int,
) -> None:
    """Accumulate sliced curve values for rows [r0, r1) into ``out``."""
    x0, x1, fx = (a[r0:r1] for a in row_cells)
    y0, y1, fy = col_cells
    n_curves, m = knots.shape[2], knots.shape[3]
    n_in = pixels.shape[2]
    acc = out[r0:r1]

    for p in range(n_in):
        cidx = np.arange(3 * p, 3 * p + 3) if n_curves == 9 else np.arange(3)
        v = np.clip(pixels[r0:r1, :, p], 0.0, c_max)
        if m == 1:
            z0 = np.zeros(v.shape, dtype=np.intp)
            z1 = z0
            dz = np.zeros(v.shape)
        else:
            z = np.clip(v * ((m - 1) / c_max), 0.0, float(m - 1))
            z0 = z.astype(np.intp)
            dz = z - z0
            z1 = np.minimum(z0 + 1, m - 1)
        dzc = dz[:, :, np.newaxis]
        zlo = z0[:, :, np.newaxis]
        zhi = z1[:, :, np.newaxis]
        ci = cidx[np.newaxis, np.newaxis, :]

        for xi, wx in ((x0, 1.0 - fx), (x1, fx)):
            xs = xi[:, np.newaxis, np.newaxis]
            for yi, wy in ((y0, 1.0 - fy), (y1, fy)):
                w_sp = (wx[:, np.newaxis] * wy[np.newaxis, :])[:, :, np.newaxis]
                lo = knots[xs, yi[np.newaxis, :, np.newaxis], ci, zlo]
                hi = knots[xs, yi[np.newaxis, :, np.newaxis], ci, zhi]
                acc += w_sp * ((1.0 - dzc) * lo + dzc * hi)


def _make_jit_kernel():
    def kernel(knots, x0, x1, fx, y0, y1, fy, pixels, c_max, out, r0, r1):
        gh, gw, nc, m = knots.shape
        w = pixels.shape[1]
        n_in = pixels.shape[2]
        for i in range(r0, r1):
            a0 = x0[i]
            a1 = x1[i]
            wx1 = fx[i]
            wx0 = 1.0 - wx1
            for j in range(w):
                b0 = y0[j]
                b1 = y1[j]
                wy1 = fy[j]
                wy0 = 1.0 - wy1
                w00 = wx0 * wy0
                w01 = wx0 * wy1
                w10 = wx1 * wy0
                w11 = wx1 * wy1
                for p in range(n_in):
                    v = pixels[i, j, p]
                    if v < 0.0:
                        v = 0.0
                    elif v > c_max:
                        v = c_max
                    if m == 1:
                        z0 = 0
                        z1 = 0
                        dz = 0.0
                    else:
                        z = v * (m - 1) / c_max
                        if z < 0.0:
                            z = 0.0
                        elif z > m - 1:
                            z = float(m - 1)
                        z0 = int(z)
                        dz = z - z0
                        z1 = min(z0 + 1, m - 1)
                    base = 3 * p if nc == 9 else 0
                    for q in range(3):
                        c = base + q
                        lo = (
                            w00 * knots[a0, b0, c, z0]
                            + w01 * knots[a0, b1, c, z0]
                            + w10 * knots[a1, b0, c, z0]
                            + w11 * knots[a1, b1, c, z0]
                        )
                        hi = (
                            w00 * knots[a0, b0, c, z1]
                            + w01 * knots[a0, b1, c, z1]
                            + w10 * knots[a1, b0, c, z1]
                            + w11 * knots[a1, b1, c, z1]
                        )
                        out[i, j, q] += (1.0 - dz) * lo + dz * hi

    return _njit(cache=True, nogil=True)(kernel)


_jit_kernel = _make_jit_kernel() if HAS_NUMBA else None


def translate(
    grid: CurveGrid,
    img: Image,
    cfg: TranslatorConfig | None = None,
    *,
    workers: int | None = None,
    use_jit: bool | None = None,
) -> Image:
    """Apply the lattice's curves to every pixel of ``img``.

    9-curve grids take a 3-channel image, 3-curve grids a 1-channel image;
    the output always has 3 channels and the input's dimensions.  Work is
    partitioned into row tiles, optionally across ``workers`` threads
    (default: MCT_THREADS env var, else CPU count); results are identical to
    sequential evaluation regardless of worker count.  ``use_jit`` selects
    the compiled per-pixel kernel (default: on when numba is importable and
    CURVEGRID_NO_NUMBA is unset); the vectorized numpy path is the fallback.
    """
    if cfg is None:
        cfg = TranslatorConfig(c_max=grid.c_max)
    if grid.n_curves == 9 and img.channels != 3:
        raise ChannelMismatchError(f"9-curve grid needs a 3-channel image, got {img.channels}")
    if grid.n_curves == 3 and img.channels != 1:
        raise ChannelMismatchError(f"3-curve grid needs a 1-channel image, got {img.channels}")
    if grid.c_max != img.c_max:
        raise ConfigError(f"c_max mismatch: grid has {grid.c_max}, image has {img.c_max}")
    if cfg.c_max != grid.c_max:
        raise ConfigError(f"c_max mismatch: config has {cfg.c_max}, grid has {grid.c_max}")

    h, w = img.height, img.width
    row_cells = _axis_lattice(h, grid.grid_h)
    col_cells = _axis_lattice(w, grid.grid_w)
    # gather from the float32 table (cache-friendly); the float64 weights
    # promote every arithmetic step to float64
    knots = grid.knots
    out = np.zeros((h, w, 3))

    n_workers = _resolve_workers(workers)
    tile_rows = max(1, _TILE_PIXELS // w)
    bounds = list(range(0, h, tile_rows)) + [h]
    tiles = list(zip(bounds[:-1], bounds[1:]))

    if use_jit is None:
        use_jit = HAS_NUMBA
    if use_jit and not HAS_NUMBA:
        raise ConfigError("use_jit=True but numba is not available")

    if use_jit:
        x0, x1, fx = row_cells
        y0, y1, fy = col_cells

        def run(tile):
            _jit_kernel(knots, x0, x1, fx, y0, y1, fy, img.data, grid.c_max, out, *tile)

    else:

        def run(tile):
            _translate_rows(out, img.data, knots, row_cells, col_cells, grid.c_max, *tile)

    if n_workers == 1 or len(tiles) == 1:
        for tile in tiles:
            run(tile)
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            list(pool.map(run, tiles))

    if cfg.clamp_output:
        np.clip(out, 0.0, grid.c_max, out=out)
    return Image(out, grid.c_max, check_range=cfg.clamp_output)


# ----------------------------------------------------------------------
# MCPM serialization
# ----------------------------------------------------------------------

def save_grid(grid: CurveGrid) -> bytes:
    """Serialize a grid to MCPM bytes."""
    flags = 1 if grid.n_curves == 3 else 0
    header = _HEADER.pack(
        MCPM_MAGIC, MCPM_VERSION, flags, grid.grid_h, grid.grid_w, grid.m, grid.c_max
    )
    payload = grid.knots.astype("<f4", copy=False).tobytes()
    return header + payload


def load_grid(data: bytes) -> CurveGrid:
    """Parse MCPM bytes into a grid."""
    if len(data) < _HEADER.size:
        raise FormatError(f"header truncated: need {_HEADER.size} bytes, got {len(data)}")
    magic, version, flags, gh, gw, m, c_max = _HEADER.unpack_from(data)
    if magic != MCPM_MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MCPM_MAGIC!r}")
    if version != MCPM_VERSION:
        raise FormatError(f"unsupported version {version}, expected {MCPM_VERSION}")
    if flags & ~1:
        raise FormatError(f"unknown flag bits 0x{flags:04x}")
    if gh < 1 or gw < 1 or m < 1:
        raise FormatError(f"bad dimensions grid_h={gh}, grid_w={gw}, m={m}")
    if not (math.isfinite(c_max) and c_max > 0):
        raise FormatError(f"bad c_max {c_max}")
    n_curves = 3 if flags & 1 else 9
    expected = gh * gw * n_curves * m * 4
    payload = data[_HEADER.size :]
    if len(payload) != expected:
        raise FormatError(f"payload length mismatch: expected {expected} bytes, got {len(payload)}")
    knots = np.frombuffer(payload, dtype="<f4").reshape(gh, gw, n_curves, m)
    if not np.isfinite(knots).all():
        raise FormatError("payload contains non-finite knot values")
    return CurveGrid(knots, c_max)
