"""
Grayscale-source pipeline
=========================

When low-frequency color must come entirely from the lattice, the source
image is collapsed to luma and translated through a 3-curve grid: each cell
holds one curve per *output* channel, all reading the single gray input.
Brightness matching beforehand keeps the source's exposure from leaking
through.

Writes PNGs into demos/out/.
"""

from pathlib import Path

import numpy as np

from curvegrid import CurveGrid, Image, encode_image, match_brightness, to_grayscale, translate

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

# Synthetic content: gradients plus a bright blob.
h, w = 360, 480
yy, xx = np.mgrid[0:h, 0:w]
blob = np.exp(-(((xx - 150) / 90.0) ** 2 + ((yy - 120) / 70.0) ** 2))
content = Image(
    np.stack([xx / (w - 1) * 0.8, 0.3 + 0.5 * blob, yy / (h - 1) * 0.9], axis=2).clip(0, 1)
)

# A warm "reference": brighter and amber-leaning.
style = Image(np.stack([np.full((h, w), 0.75), np.full((h, w), 0.62), np.full((h, w), 0.45)], axis=2))

# Gray the content, then shift its mean to the reference's.
gray = to_grayscale(content)
gray_style = to_grayscale(style)
aligned = match_brightness(gray, gray_style)
print("gray mean", float(gray.data.mean()), "->", float(aligned.data.mean()))

# A duotone 3-curve grid: shadows toward steel blue, highlights toward
# amber, with a horizontal sweep so the split drifts across the frame.
m, gh, gw = 12, 6, 8
t = np.arange(m) / (m - 1)
shadow = np.array([0.10, 0.16, 0.35])
light = np.array([1.00, 0.86, 0.55])
knots = np.zeros((gh, gw, 3, m))
for j in range(gw):
    lean = j / (gw - 1)  # 0 = pure duotone, 1 = lifted shadows
    lo = shadow * (1 - lean) + 0.25 * lean
    for q in range(3):
        knots[:, j, q, :] = lo[q] + (light[q] - lo[q]) * t
grid = CurveGrid(knots)

toned = translate(grid, aligned)
print("output channels:", toned.channels)
(out_dir / "gray_input.png").write_bytes(encode_image(aligned, "png"))
(out_dir / "duotone.png").write_bytes(encode_image(toned, "png"))
print("wrote gray_input.png and duotone.png")
