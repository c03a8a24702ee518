"""Wall-clock throughput harness for the slicing engine.

Measures two things the cost model predicts analytically: translation time
grows linearly with the pixel count, while lattice-side work (building the
grid) does not depend on the image size at all.  Each measurement runs
``warmup`` untimed iterations, then ``repeats`` timed ones, and reports the
median; inputs are generated from a seed so runs are reproducible.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .compose import synth_grid
from .errors import ConfigError
from .image import Image
from .lattice import CurveGrid, _resolve_workers, translate

CSV_HEADER = "label,height,width,repeats,median_seconds,mpix_per_s"


@dataclass(frozen=True)
class BenchEntry:
    label: str
    height: int
    width: int
    repeats: int
    median_seconds: float
    mpix_per_s: float


@dataclass
class BenchReport:
    entries: list[BenchEntry] = field(default_factory=list)
    errors: list[tuple[str, str]] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for e in self.entries:
            lines.append(
                f"{e.label},{e.height},{e.width},{e.repeats},"
                f"{e.median_seconds:.9g},{e.mpix_per_s:.9g}"
            )
        return "\n".join(lines) + "\n"


def synthetic_image(h: int, w: int, channels: int, c_max: float, seed: int) -> Image:
    """Deterministic pseudorandom test image; same arguments, same pixels."""
    rng = np.random.default_rng((seed, h, w, channels))
    return Image(rng.random((h, w, channels)) * c_max, c_max)


def _measure(fn, repeats: int, warmup: int) -> float:
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def _check_protocol(sizes, repeats: int, warmup: int) -> None:
    if not sizes:
        raise ConfigError("sizes must be non-empty")
    if repeats < 3:
        raise ConfigError(f"repeats must be >= 3 for a meaningful median, got {repeats}")
    if warmup < 0:
        raise ConfigError(f"warmup must be >= 0, got {warmup}")


def bench_translate(
    grid: CurveGrid,
    sizes: list[tuple[int, int]],
    repeats: int = 10,
    warmup: int = 1,
    seed: int = 0,
    workers: int | None = None,
) -> BenchReport:
    """Time full-raster translation at each requested image size."""
    _check_protocol(sizes, repeats, warmup)
    channels = 3 if grid.n_curves == 9 else 1
    label = f"translate/w{_resolve_workers(workers)}"
    report = BenchReport()
    for h, w in sizes:
        try:
            img = synthetic_image(h, w, channels, grid.c_max, seed)
            median = _measure(lambda: translate(grid, img, workers=workers), repeats, warmup)
        except MemoryError as exc:
            report.errors.append((f"{label}/{h}x{w}", f"allocation failed: {exc}"))
            continue
        report.entries.append(
            BenchEntry(label, h, w, repeats, median, (h * w / 1e6) / median)
        )
    return report


def bench_grid_build(
    grid_h: int,
    grid_w: int,
    m: int,
    sizes: list[tuple[int, int]],
    repeats: int = 10,
    warmup: int = 1,
) -> BenchReport:
    """Time lattice construction once per requested *image* size.

    The work is identical for every entry; the point of the report is to
    show that grid-side cost does not scale with the raster it will serve.
    """
    _check_protocol(sizes, repeats, warmup)
    report = BenchReport()
    for h, w in sizes:
        median = _measure(
            lambda: synth_grid("spatial_gamma", grid_h, grid_w, m, gamma_left=0.5, gamma_right=2.0),
            repeats,
            warmup,
        )
        report.entries.append(
            BenchEntry("grid_build", h, w, repeats, median, (h * w / 1e6) / median)
        )
    return report
