"""
Base composition and lattice misalignment
=========================================

Two grid transforms used when a low-resolution reconstruction drives the
translator:

* ``compose_base`` folds a low-res image into the lattice as per-cell
  biases on the diagonal curves.  With single-knot (constant) curves the
  whole translator collapses to bilinear upsampling of that image.
* ``misalign`` shifts the lattice relative to the raster by a seeded
  random pad-and-crop, so grid cells stop being pixel-aligned.
"""

import numpy as np

from curvegrid import CurveGrid, Image, compose_base, downsample, misalign, translate

rng = np.random.default_rng(7)

# --- compose_base: the single-knot special case --------------------------
# Start from an all-zero delta grid with m=1 and fold in a random 12x16
# "reconstruction".  Translating ANY image through the result is exactly
# bilinear upsampling of the reconstruction: the input pixels only pick
# where in the lattice to interpolate, and constant curves ignore them.
base = Image(rng.random((12, 16, 3)))
grid = compose_base(CurveGrid(np.zeros((12, 16, 9, 1), np.float32)), base)

arbitrary = Image(rng.random((180, 240, 3)))
out = translate(grid, arbitrary)
up = downsample(base, 180, 240)  # same bilinear resize, used to upsample
print("max |translate - upsample|:", np.abs(out.data - up.data).max())

# With m >= 2 knots the deltas add real per-cell tone curves on top of the
# bias, which is how a translator refines a coarse reconstruction.

# --- misalign: seeded lattice shifts --------------------------------------
grid2 = CurveGrid(rng.standard_normal((6, 6, 9, 4)).astype(np.float32))
shifted = misalign(grid2, pad=2, seed=41)
same = misalign(grid2, pad=2, seed=41)
other = misalign(grid2, pad=2, seed=42)
print("same seed reproduces the crop:", np.array_equal(shifted.knots, same.knots))
print("different seed shifts differently:", not np.array_equal(shifted.knots, other.knots))
print("pad=0 is the identity:", misalign(grid2, 0, 0) is grid2)

# Every output cell is a copy of some input cell (replication at the rim).
cells = {grid2.knots[i, j].tobytes() for i in range(6) for j in range(6)}
print(
    "output cells all come from the input lattice:",
    all(shifted.knots[i, j].tobytes() in cells for i in range(6) for j in range(6)),
)
