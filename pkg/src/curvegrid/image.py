"""Image container and pixel-level preprocessing.

Images are dense ``(height, width, channels)`` float64 rasters with values in
``[0, c_max]`` (``c_max`` defaults to 1.0; set it to 255.0 to work in the
8-bit integer domain).  File I/O covers PNG (8/16-bit, grayscale and RGB,
non-interlaced) and binary PPM/PGM (8-bit).  All operations are pure and the
pixel buffer is frozen after construction, so images are safe to share across
threads.
"""

from __future__ import annotations

import math
import struct
import zlib

import numpy as np

from .errors import ChannelMismatchError, ConfigError, FormatError, ShapeError, UnsupportedFormatError

GRAY_WEIGHTS = (0.299, 0.587, 0.114)  # Rec. 601 luma

_PNG_SIG = b"\x89PNG\r\n\x1a\n"


class Image:
    """Immutable float raster.

    ``data`` has shape ``(height, width, channels)`` with ``channels`` 1 or 3.
    Values lie in ``[0, c_max]`` unless the image was produced by an
    explicitly unclamped pipeline stage (``check_range=False``).

    The constructor adopts the buffer and freezes it; pass a copy if you
    need to keep writing to the source array.
    """

    __slots__ = ("data", "c_max")

    def __init__(self, data, c_max: float = 1.0, check_range: bool = True):
        arr = np.ascontiguousarray(data, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[:, :, np.newaxis]
        if arr.ndim != 3:
            raise ShapeError(f"image data must be 2-D or 3-D, got shape {np.shape(data)}")
        h, w, c = arr.shape
        if h < 1 or w < 1:
            raise ShapeError(f"image dimensions must be >= 1, got {h}x{w}")
        if c not in (1, 3):
            raise ChannelMismatchError(f"channel count must be 1 or 3, got {c}")
        if not (math.isfinite(c_max) and c_max > 0):
            raise ConfigError(f"c_max must be finite and > 0, got {c_max}")
        if not np.isfinite(arr).all():
            raise ValueError("image contains non-finite values")
        if check_range and (arr.min() < 0.0 or arr.max() > c_max):
            raise ValueError(
                f"pixel values outside [0, {c_max}]: min={arr.min()}, max={arr.max()}"
            )
        arr.setflags(write=False)
        self.data = arr
        self.c_max = float(c_max)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    def __repr__(self) -> str:
        return f"Image({self.height}x{self.width}x{self.channels}, c_max={self.c_max})"


# ----------------------------------------------------------------------
# Decoding
# ----------------------------------------------------------------------

def decode_image(data: bytes) -> Image:
    """Decode a PNG or binary PPM/PGM file into a normalized image.

    Output values are scaled to [0, 1] (c_max = 1.0): 8-bit samples divide by
    255 (or the PNM maxval), 16-bit PNG samples divide by 65535.  Color files
    yield 3 channels, grayscale files 1 channel.
    """
    if len(data) >= 8 and data[:8] == _PNG_SIG:
        return _decode_png(data)
    if len(data) >= 2 and data[:2] in (b"P6", b"P5"):
        return _decode_pnm(data)
    raise UnsupportedFormatError(
        "unrecognized image container at offset 0 (expected PNG signature or P5/P6 magic)"
    )


def _decode_png(data: bytes) -> Image:
    pos = 8
    ihdr = None
    idat = bytearray()
    seen_iend = False
    while pos < len(data):
        if pos + 8 > len(data):
            raise FormatError(f"truncated chunk header at offset {pos}")
        (length,) = struct.unpack_from(">I", data, pos)
        ctype = data[pos + 4 : pos + 8]
        body_start = pos + 8
        body_end = body_start + length
        if body_end + 4 > len(data):
            raise FormatError(f"truncated chunk {ctype!r} at offset {pos}")
        body = data[body_start:body_end]
        (crc,) = struct.unpack_from(">I", data, body_end)
        if crc != zlib.crc32(ctype + body) & 0xFFFFFFFF:
            raise FormatError(f"CRC mismatch in chunk {ctype!r} at offset {pos}")
        pos = body_end + 4

        if ctype == b"IHDR":
            if len(body) != 13:
                raise FormatError("IHDR length must be 13")
            ihdr = _check_ihdr(struct.unpack(">IIBBBBB", body))
        elif ctype == b"IDAT":
            idat.extend(body)
        elif ctype == b"IEND":
            seen_iend = True
            break

    if ihdr is None:
        raise FormatError("missing IHDR chunk")
    if not seen_iend:
        raise FormatError("missing IEND chunk")
    if not idat:
        raise FormatError("no IDAT data")
    width, height, depth, color = ihdr

    channels = 1 if color == 0 else 3
    bpp = channels * depth // 8
    rowbytes = width * bpp
    try:
        raw = zlib.decompress(bytes(idat))
    except zlib.error as exc:
        raise FormatError(f"IDAT inflate failed: {exc}") from None
    expected = height * (rowbytes + 1)
    if len(raw) != expected:
        raise FormatError(f"decompressed size {len(raw)} != expected {expected}")

    flat = _unfilter(raw, height, rowbytes, bpp)
    if depth == 8:
        arr = np.frombuffer(flat, dtype=np.uint8).astype(np.float64) / 255.0
    else:
        arr = np.frombuffer(flat, dtype=">u2").astype(np.float64) / 65535.0
    return Image(arr.reshape(height, width, channels), 1.0)


def _check_ihdr(fields: tuple) -> tuple[int, int, int, int]:
    width, height, depth, color, compression, filt, interlace = fields
    if width < 1 or height < 1:
        raise FormatError(f"bad dimensions {width}x{height} in IHDR")
    if compression != 0 or filt != 0:
        raise FormatError("unknown compression/filter method in IHDR")
    if interlace != 0:
        raise UnsupportedFormatError("interlaced PNG is not supported")
    if color not in (0, 2):
        raise UnsupportedFormatError(
            f"PNG color type {color} not supported (grayscale=0 or RGB=2 only)"
        )
    if depth not in (8, 16):
        raise UnsupportedFormatError(f"PNG bit depth {depth} not supported (8 or 16 only)")
    return width, height, depth, color


def _unfilter(raw: bytes, height: int, rowbytes: int, bpp: int) -> bytes:
    """Reverse PNG scanline filters (types 0-4)."""
    out = np.zeros((height, rowbytes), dtype=np.uint8)
    prev = np.zeros(rowbytes, dtype=np.uint8)
    pos = 0
    for r in range(height):
        ftype = raw[pos]
        line = np.frombuffer(raw, dtype=np.uint8, count=rowbytes, offset=pos + 1).copy()
        pos += rowbytes + 1
        if ftype == 0:
            cur = line
        elif ftype == 1:  # Sub: additive along the row, one lane per byte of a pixel
            lanes = line.reshape(-1, bpp).astype(np.uint64)
            cur = (np.cumsum(lanes, axis=0) % 256).astype(np.uint8).reshape(-1)
        elif ftype == 2:  # Up
            cur = line + prev
        elif ftype == 3:  # Average
            cur = line
            for i in range(rowbytes):
                left = int(cur[i - bpp]) if i >= bpp else 0
                cur[i] = (int(line[i]) + ((left + int(prev[i])) >> 1)) & 0xFF
        elif ftype == 4:  # Paeth
            cur = line
            for i in range(rowbytes):
                a = int(cur[i - bpp]) if i >= bpp else 0
                b = int(prev[i])
                c = int(prev[i - bpp]) if i >= bpp else 0
                p = a + b - c
                pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
                if pa <= pb and pa <= pc:
                    pred = a
                elif pb <= pc:
                    pred = b
                else:
                    pred = c
                cur[i] = (int(line[i]) + pred) & 0xFF
        else:
            raise FormatError(f"unknown scanline filter type {ftype} in row {r}")
        out[r] = cur
        prev = cur
    return out.tobytes()


def _pnm_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        b = data[pos]
        if b in b" \t\r\n":
            pos += 1
        elif b == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    if pos >= n:
        raise FormatError(f"truncated PNM header at offset {pos}")
    start = pos
    while pos < n and data[pos] not in b" \t\r\n":
        pos += 1
    return data[start:pos], pos


def _decode_pnm(data: bytes) -> Image:
    magic = data[:2]
    channels = 3 if magic == b"P6" else 1
    pos = 2
    fields = []
    for name in ("width", "height", "maxval"):
        tok, pos = _pnm_token(data, pos)
        try:
            fields.append(int(tok))
        except ValueError:
            raise FormatError(f"non-numeric {name} {tok!r} in PNM header") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise FormatError(f"bad PNM dimensions {width}x{height}")
    if not 0 < maxval < 256:
        raise UnsupportedFormatError(f"PNM maxval {maxval} not supported (8-bit only)")
    pos += 1  # single whitespace byte separates header from raster
    need = width * height * channels
    if len(data) - pos < need:
        raise FormatError(
            f"PNM raster truncated: expected {need} bytes at offset {pos}, got {len(data) - pos}"
        )
    arr = np.frombuffer(data, dtype=np.uint8, count=need, offset=pos)
    arr = arr.astype(np.float64) / float(maxval)
    return Image(np.minimum(arr, 1.0).reshape(height, width, channels), 1.0)


# ----------------------------------------------------------------------
# Encoding
# ----------------------------------------------------------------------

def encode_image(img: Image, format: str = "png") -> bytes:
    """Serialize an image to 8-bit PNG or binary PPM/PGM bytes.

    Values are quantized with round-half-up: byte = round(v / c_max * 255).
    """
    q = np.floor(img.data / img.c_max * 255.0 + 0.5)
    q = np.clip(q, 0.0, 255.0).astype(np.uint8)
    if format == "png":
        return _encode_png(q)
    if format == "ppm":
        return _encode_pnm(q)
    raise ConfigError(f"unknown image format {format!r} (expected 'png' or 'ppm')")


def _png_chunk(ctype: bytes, body: bytes) -> bytes:
    return (
        struct.pack(">I", len(body))
        + ctype
        + body
        + struct.pack(">I", zlib.crc32(ctype + body) & 0xFFFFFFFF)
    )


def _encode_png(q: np.ndarray) -> bytes:
    h, w, c = q.shape
    color = 0 if c == 1 else 2
    ihdr = struct.pack(">IIBBBBB", w, h, 8, color, 0, 0, 0)
    # filter type 0 on every scanline
    rows = np.concatenate([np.zeros((h, 1), dtype=np.uint8), q.reshape(h, w * c)], axis=1)
    return (
        _PNG_SIG
        + _png_chunk(b"IHDR", ihdr)
        + _png_chunk(b"IDAT", zlib.compress(rows.tobytes()))
        + _png_chunk(b"IEND", b"")
    )


def _encode_pnm(q: np.ndarray) -> bytes:
    h, w, c = q.shape
    magic = b"P6" if c == 3 else b"P5"
    return magic + f"\n{w} {h}\n255\n".encode("ascii") + q.tobytes()


# ----------------------------------------------------------------------
# Resampling and color operations
# ----------------------------------------------------------------------

def _edge_aligned_coords(dst_n: int, src_n: int) -> np.ndarray:
    """Source positions for each destination index, corners pinned to corners."""
    if dst_n == 1:
        return np.full(1, (src_n - 1) / 2.0)
    return np.arange(dst_n, dtype=np.float64) * ((src_n - 1) / (dst_n - 1))


def downsample(img: Image, out_h: int, out_w: int) -> Image:
    """Bilinear resample to ``out_h x out_w`` with edge-aligned coordinates.

    The mapping is src = dst * (S-1)/(D-1) on each axis (src = (S-1)/2 when
    the destination axis has a single sample).  Works for upsampling too.
    """
    if out_h < 1 or out_w < 1:
        raise ShapeError(f"target dimensions must be >= 1, got {out_h}x{out_w}")
    if out_h == img.height and out_w == img.width:
        return img

    src = img.data
    r = _edge_aligned_coords(out_h, img.height)
    c = _edge_aligned_coords(out_w, img.width)
    r0 = np.floor(r).astype(np.intp)
    c0 = np.floor(c).astype(np.intp)
    r1 = np.minimum(r0 + 1, img.height - 1)
    c1 = np.minimum(c0 + 1, img.width - 1)
    dr = (r - r0)[:, np.newaxis, np.newaxis]
    dc = (c - c0)[np.newaxis, :, np.newaxis]

    top = src[r0]
    bot = src[r1]
    rows = top * (1.0 - dr) + bot * dr
    out = rows[:, c0] * (1.0 - dc) + rows[:, c1] * dc
    # convex combination; clip guards against one-ulp overshoot only
    np.clip(out, 0.0, img.c_max, out=out)
    return Image(out, img.c_max)


def to_grayscale(img: Image) -> Image:
    """Collapse RGB to single-channel luma (Rec. 601 weights)."""
    if img.channels != 3:
        raise ChannelMismatchError(f"grayscale conversion needs 3 channels, got {img.channels}")
    gray = img.data @ np.asarray(GRAY_WEIGHTS, dtype=np.float64)
    np.clip(gray, 0.0, img.c_max, out=gray)
    return Image(gray[:, :, np.newaxis], img.c_max)


def match_brightness(content: Image, style: Image) -> Image:
    """Shift each content channel so its mean matches the style channel mean.

    Result is clamped to [0, c_max]; before clamping the per-channel means
    equal the style means exactly.
    """
    if content.channels != style.channels:
        raise ChannelMismatchError(
            f"channel mismatch: content has {content.channels}, style has {style.channels}"
        )
    if content.c_max != style.c_max:
        raise ConfigError(
            f"c_max mismatch: content has {content.c_max}, style has {style.c_max}"
        )
    shift = style.data.mean(axis=(0, 1)) - content.data.mean(axis=(0, 1))
    out = content.data + shift
    np.clip(out, 0.0, content.c_max, out=out)
    return Image(out, content.c_max)
