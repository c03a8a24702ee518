"""1D lookup-table curves: knot storage, coordinate lookup, linear interpolation.

A curve is a piecewise-linear transfer function sampled at ``m`` knots spread
evenly over the input domain ``[0, c_max]``.  A single knot (m = 1) is a
constant curve.  Knot values may lie outside ``[0, c_max]``; biased curves are
legitimate and clamping is the final output stage's job, not the curve's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class Curve1D:
    """Immutable 1D LUT with ``m`` knot values."""

    knots: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.knots, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise ConfigError(f"knots must be a 1-D array with >= 1 entries, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("knot values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "knots", arr)

    @property
    def m(self) -> int:
        return self.knots.size

    @classmethod
    def identity(cls, m: int, c_max: float = 1.0) -> "Curve1D":
        if m < 2:
            raise ConfigError("identity curve needs at least 2 knots")
        return cls(np.arange(m, dtype=np.float64) * (c_max / (m - 1)))


def lookup_coord(v: float, m: int, c_max: float) -> float:
    """Map a pixel value to its fractional knot coordinate z = v*(m-1)/c_max.

    The input is clamped into [0, c_max] first, so z always lies in
    [0, m-1]; a 1-knot curve always indexes coordinate 0.
    """
    if not math.isfinite(v):
        raise ValueError(f"pixel value must be finite, got {v}")
    if m < 1:
        raise ConfigError(f"knot count must be >= 1, got {m}")
    if not (math.isfinite(c_max) and c_max > 0):
        raise ConfigError(f"c_max must be finite and > 0, got {c_max}")
    if m == 1:
        return 0.0
    v = min(max(v, 0.0), c_max)
    z = v * (m - 1) / c_max
    return min(max(z, 0.0), float(m - 1))


def eval_curve(curve: Curve1D, v: float, c_max: float = 1.0) -> float:
    """Evaluate the curve at ``v`` by linear interpolation between knots.

    z integral returns the stored knot exactly.
    """
    z = lookup_coord(v, curve.m, c_max)
    k0 = math.floor(z)
    dz = z - k0
    k1 = math.ceil(z)
    return (1.0 - dz) * curve.knots[k0] + dz * curve.knots[k1]
