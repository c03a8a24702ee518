"""
Measured throughput
===================

The cost model's two claims, observed on the wall clock: translation time
scales with the pixel count, and lattice-side work does not scale at all.
Writes demos/out/throughput.csv.
"""

from pathlib import Path

import numpy as np

from curvegrid import CurveGrid, bench_grid_build, bench_translate

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

rng = np.random.default_rng(3)
grid = CurveGrid(rng.standard_normal((256, 256, 9, 8)).astype(np.float32))

sizes = [(480, 640), (1080, 1920), (2160, 3840)]
run = bench_translate(grid, sizes, repeats=5, warmup=1)
build = bench_grid_build(256, 256, 8, sizes, repeats=5, warmup=1)

print(f"{'size':>12} {'translate':>12} {'grid build':>12} {'Mpix/s':>8}")
for t, b in zip(run.entries, build.entries):
    print(
        f"{f'{t.height}x{t.width}':>12} {t.median_seconds:>10.3f} s"
        f" {b.median_seconds:>10.4f} s {t.mpix_per_s:>8.1f}"
    )

t1, t2 = run.entries[1].median_seconds, run.entries[2].median_seconds
print(f"\n1080p -> 4K: pixels grew 4.0x, translate time grew {t2/t1:.1f}x")
b0, b2 = build.entries[0].median_seconds, build.entries[-1].median_seconds
print(f"grid-build time ratio across sizes: {b2/b0:.2f}x (flat by construction)")

csv = out_dir / "throughput.csv"
csv.write_text(run.to_csv() + "".join(build.to_csv().splitlines(True)[1:]))
print("wrote", csv)
