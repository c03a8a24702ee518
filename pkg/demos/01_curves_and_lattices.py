"""
Curves and lattices
===================

The two core data structures: a 1D lookup-table curve, and a spatial
lattice of curve sets that can be saved to and loaded from .mcpm files.
"""

import numpy as np

from curvegrid import Curve1D, eval_curve, load_grid, lookup_coord, save_grid, synth_grid

# A curve is just m knot values spread evenly over [0, c_max].  Evaluating
# it looks up the fractional knot coordinate and linearly interpolates.
curve = Curve1D([0.0, 0.25, 0.9, 1.0])
for v in (0.0, 0.2, 0.5, 1.0):
    z = lookup_coord(v, curve.m, 1.0)
    print(f"v={v:.2f}  ->  coordinate z={z:.2f}  ->  value {eval_curve(curve, v):.4f}")

# The identity curve returns its input everywhere.
ident = Curve1D.identity(8)
print("\nidentity curve at 0.3:", eval_curve(ident, 0.3))

# A lattice carries 9 curves per cell (one per input/output channel pair,
# indexed 3*p + q) and can be built from closed forms for experiments.
grid = synth_grid("gamma", grid_h=16, grid_w=16, m=8, gamma=2.2)
print("\ngrid:", grid)
print("diagonal R->R curve at cell (0, 0):", np.round(grid.knots[0, 0, 0], 4))
print("off-diagonal R->G curve is zero:   ", grid.knots[0, 0, 1])

# Grids serialize to a 24-byte header plus float32 knots; the round trip
# is bit-exact.
blob = save_grid(grid)
back = load_grid(blob)
print(f"\nserialized {len(blob)} bytes; round-trip exact:", np.array_equal(back.knots, grid.knots))
