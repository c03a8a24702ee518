"""Brute-force reference implementations used as test oracles.

Deliberately naive, scalar, and written straight from the math so they share
no code or vectorization strategy with the library paths they check.
"""

import math

import numpy as np


def bilinear_resize_naive(src: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Edge-aligned bilinear resize, one output pixel at a time."""
    in_h, in_w, ch = src.shape
    out = np.zeros((out_h, out_w, ch))
    for i in range(out_h):
        r = (in_h - 1) / 2.0 if out_h == 1 else i * (in_h - 1) / (out_h - 1)
        r0 = math.floor(r)
        r1 = min(r0 + 1, in_h - 1)
        dr = r - r0
        for j in range(out_w):
            c = (in_w - 1) / 2.0 if out_w == 1 else j * (in_w - 1) / (out_w - 1)
            c0 = math.floor(c)
            c1 = min(c0 + 1, in_w - 1)
            dc = c - c0
            for k in range(ch):
                top = (1 - dc) * src[r0, c0, k] + dc * src[r0, c1, k]
                bot = (1 - dc) * src[r1, c0, k] + dc * src[r1, c1, k]
                out[i, j, k] = (1 - dr) * top + dr * bot
    return out


def curve_eval_naive(knots, v: float, c_max: float) -> float:
    """Scalar lookup + linear interpolation on a list of knot values."""
    m = len(knots)
    if m == 1:
        return float(knots[0])
    v = min(max(v, 0.0), c_max)
    z = v * (m - 1) / c_max
    z = min(max(z, 0.0), float(m - 1))
    dz = z - math.floor(z)
    return (1.0 - dz) * float(knots[math.floor(z)]) + dz * float(knots[math.ceil(z)])


def slice_naive(knots, c: int, i: int, j: int, v: float, h: int, w: int, c_max: float) -> float:
    """Literal eight-corner trilinear interpolation of one lattice query.

    ``knots`` is a nested python list [i][j][c][k] (use ``grid.knots.tolist()``).
    """
    gh = len(knots)
    gw = len(knots[0])
    m = len(knots[0][0][c])
    x = 0.0 if h == 1 else i * (gh - 1) / (h - 1)
    y = 0.0 if w == 1 else j * (gw - 1) / (w - 1)
    if m == 1:
        z = 0.0
    else:
        vv = min(max(v, 0.0), c_max)
        z = min(max(vv * (m - 1) / c_max, 0.0), float(m - 1))
    xf, xc = math.floor(x), math.ceil(x)
    yf, yc = math.floor(y), math.ceil(y)
    zf, zc = math.floor(z), math.ceil(z)
    dx, dy, dz = x - xf, y - yf, z - zf
    t = knots
    return (
        (1 - dx) * (1 - dy) * (1 - dz) * t[xf][yf][c][zf]
        + dx * dy * dz * t[xc][yc][c][zc]
        + (1 - dx) * dy * (1 - dz) * t[xf][yc][c][zf]
        + dx * (1 - dy) * dz * t[xc][yf][c][zc]
        + dx * dy * (1 - dz) * t[xc][yc][c][zf]
        + (1 - dx) * (1 - dy) * dz * t[xf][yf][c][zc]
        + dx * (1 - dy) * (1 - dz) * t[xc][yf][c][zf]
        + (1 - dx) * dy * dz * t[xf][yc][c][zc]
    )


def translate_naive(grid_knots: np.ndarray, pixels: np.ndarray, c_max: float, clamp: bool = True) -> np.ndarray:
    """Per-pixel translation: sum the sliced curves feeding each output channel."""
    knots = grid_knots.astype(np.float64).tolist()
    n_curves = grid_knots.shape[2]
    h, w, n_in = pixels.shape
    out = np.zeros((h, w, 3))
    for i in range(h):
        for j in range(w):
            for q in range(3):
                acc = 0.0
                for p in range(n_in):
                    c = 3 * p + q if n_curves == 9 else q
                    acc += slice_naive(knots, c, i, j, float(pixels[i, j, p]), h, w, c_max)
                out[i, j, q] = acc
    if clamp:
        np.clip(out, 0.0, c_max, out=out)
    return out


def psnr(result: np.ndarray, reference: np.ndarray, peak: float = 1.0) -> float:
    mse = float(np.mean((np.asarray(result, dtype=np.float64) - reference) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)
