"""Analytical multiply-accumulate (MAC) cost model.

Counts MACs for fully convolutional architectures and for their curve-grid
variants, with exact integer arithmetic throughout (spatial scales are
rationals, never floats).

Counting conventions, applied uniformly:
  * one MAC = one multiply-accumulate; bias adds, normalization, and
    activations are not counted;
  * a convolution with ``in_ch x out_ch`` channels and a ``k x k`` kernel
    over an ``oh x ow`` output costs ``in_ch * out_ch * k^2 * oh * ow``;
  * transposed convolutions are charged at their *output* resolution with
    the same formula;
  * a residual block counts as two convolutions;
  * slicing a curve grid into an ``h x w`` output costs
    ``SLICING_MACS_PER_PIXEL * h * w``: one multiply-accumulate per
    trilinear corner per curve evaluation (3 output channels x 3 source
    curves x 8 corners = 72), with the interpolation-weight products shared
    across output channels and not charged separately.

Architecture spec files are line-oriented text: one layer per line,

    <kind> <in_ch> <out_ch> <kernel> <stride> <scale_num>/<scale_den>

where kind is conv, conv_transpose, or resblock, and the final field is the
layer's output size relative to the network input.  ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import NamedTuple

from .errors import FormatError

LAYER_KINDS = ("conv", "conv_transpose", "resblock")

SLICING_MACS_PER_PIXEL = 72


@dataclass(frozen=True)
class LayerSpec:
    kind: str
    in_ch: int
    out_ch: int
    kernel: int
    stride: int
    at_scale: Fraction

    def __post_init__(self):
        if self.kind not in LAYER_KINDS:
            raise FormatError(f"unknown layer kind {self.kind!r}, expected one of {LAYER_KINDS}")
        for name in ("in_ch", "out_ch", "kernel", "stride"):
            if getattr(self, name) < 1:
                raise FormatError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.at_scale <= 0:
            raise FormatError(f"at_scale must be > 0, got {self.at_scale}")

    @property
    def convs(self) -> int:
        return 2 if self.kind == "resblock" else 1


@dataclass(frozen=True)
class ArchSpec:
    name: str
    layers: tuple[LayerSpec, ...]
    head_out_ch: int = field(default=0)

    def __post_init__(self):
        if not self.layers:
            raise FormatError("architecture needs at least one layer")
        if self.head_out_ch == 0:
            object.__setattr__(self, "head_out_ch", self.layers[-1].out_ch)


def parse_arch(text: str, name: str = "arch") -> ArchSpec:
    """Parse an architecture spec file (see module docstring for the grammar)."""
    layers = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 6:
            raise FormatError(f"{name}:{lineno}: expected 6 fields, got {len(parts)}")
        kind = parts[0]
        try:
            in_ch, out_ch, kernel, stride = (int(p) for p in parts[1:5])
        except ValueError:
            raise FormatError(f"{name}:{lineno}: non-integer channel/kernel/stride field") from None
        scale = parts[5]
        try:
            if "/" in scale:
                num, den = scale.split("/", 1)
                at_scale = Fraction(int(num), int(den))
            else:
                at_scale = Fraction(int(scale))
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"{name}:{lineno}: bad scale {scale!r}") from None
        layers.append(LayerSpec(kind, in_ch, out_ch, kernel, stride, at_scale))
    return ArchSpec(name, tuple(layers))


def load_arch(path: str | Path) -> ArchSpec:
    path = Path(path)
    return parse_arch(path.read_text(), name=path.stem)


def cyclegan_resnet9() -> ArchSpec:
    """The shipped ResNet-9-blocks image translation generator spec."""
    text = resources.files("curvegrid").joinpath("data/cyclegan_resnet9.arch").read_text()
    return parse_arch(text, name="cyclegan_resnet9")


def _layer_macs_per_pixel(layer: LayerSpec) -> Fraction:
    """MACs per *network-input* pixel contributed by one layer."""
    return (
        layer.convs
        * layer.in_ch
        * layer.out_ch
        * layer.kernel**2
        * layer.at_scale
        * layer.at_scale
    )


def macs_fcn(arch: ArchSpec, h: int, w: int) -> int:
    """Total MACs for running the architecture on an h x w input.

    Exactly linear in h*w.  Raises if the resolution is incompatible with
    the layer scales (a fractional pixel count means the input cannot flow
    through the declared strides).
    """
    if h < 1 or w < 1:
        raise ValueError(f"input dimensions must be >= 1, got {h}x{w}")
    total = h * w * sum(_layer_macs_per_pixel(layer) for layer in arch.layers)
    if total.denominator != 1:
        raise ValueError(
            f"{h}x{w} input is not divisible by the layer scales of {arch.name!r}"
        )
    return int(total)


class MctCost(NamedTuple):
    """MAC breakdown of a curve-grid variant: backbone at lattice resolution,
    the widened output head's extra cost, and full-resolution slicing."""

    backbone: int
    head_delta: int
    slicing: int

    @property
    def total(self) -> int:
        return self.backbone + self.head_delta + self.slicing


def macs_mct(arch: ArchSpec, m: int, grid_h: int, grid_w: int, h: int, w: int) -> MctCost:
    """Cost of the curve-grid variant of ``arch``.

    The backbone runs on the ``grid_h x grid_w`` lattice input (constant in
    the image size), its final layer widens from ``head_out_ch`` to ``9*m``
    output channels, and slicing touches every one of the ``h*w`` output
    pixels.
    """
    if m < 1:
        raise ValueError(f"knot count must be >= 1, got {m}")
    backbone = macs_fcn(arch, grid_h, grid_w)
    head = arch.layers[-1]
    per_out_ch = grid_h * grid_w * _layer_macs_per_pixel(head) / head.out_ch
    delta = (9 * m - arch.head_out_ch) * per_out_ch
    if delta.denominator != 1:
        raise ValueError(
            f"{grid_h}x{grid_w} lattice is not divisible by the head scale of {arch.name!r}"
        )
    slicing = SLICING_MACS_PER_PIXEL * h * w
    return MctCost(backbone, int(delta), slicing)
