import struct
import zlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvegrid import (
    ChannelMismatchError,
    ConfigError,
    FormatError,
    Image,
    UnsupportedFormatError,
    decode_image,
    downsample,
    encode_image,
    match_brightness,
    to_grayscale,
)
from oracles import bilinear_resize_naive

MAX_QUANT_ERR = 0.5 / 255


def make_ppm(w, h, payload, maxval=255, magic=b"P6"):
    return magic + f"\n{w} {h}\n{maxval}\n".encode() + payload


def make_png(arr, depth=8, filters=None):
    """Test-local PNG writer supporting 8/16-bit and explicit filter types."""
    h, w = arr.shape[:2]
    ch = 1 if arr.ndim == 2 else arr.shape[2]
    color = 0 if ch == 1 else 2
    bpp = ch * depth // 8
    flat = arr.reshape(h, w * ch)
    raw = bytearray()
    prev = np.zeros(w * bpp, dtype=np.uint8)
    for r in range(h):
        if depth == 8:
            row = flat[r].astype(np.uint8).tobytes()
        else:
            row = flat[r].astype(">u2").tobytes()
        row = np.frombuffer(row, dtype=np.uint8)
        ftype = 0 if filters is None else filters[r % len(filters)]
        if ftype == 0:
            enc = row
        elif ftype == 1:
            enc = row.copy()
            enc[bpp:] = row[bpp:] - row[:-bpp]
        elif ftype == 2:
            enc = row - prev
        else:
            raise AssertionError("test writer only supports filters 0-2")
        raw.append(ftype)
        raw.extend(enc.tobytes())
        prev = row

    def chunk(ctype, body):
        return struct.pack(">I", len(body)) + ctype + body + struct.pack(
            ">I", zlib.crc32(ctype + body)
        )

    ihdr = struct.pack(">IIBBBBB", w, h, depth, color, 0, 0, 0)
    return (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", ihdr)
        + chunk(b"IDAT", zlib.compress(bytes(raw)))
        + chunk(b"IEND", b"")
    )


class TestImageType:
    def test_valid(self, rng):
        img = Image(rng.random((4, 5, 3)))
        assert (img.height, img.width, img.channels) == (4, 5, 3)
        assert img.data.flags.writeable is False

    def test_2d_becomes_single_channel(self):
        img = Image(np.zeros((3, 3)))
        assert img.channels == 1

    def test_rejects_bad_channels(self):
        with pytest.raises(ChannelMismatchError):
            Image(np.zeros((2, 2, 4)))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Image(np.full((2, 2, 3), 1.5))
        with pytest.raises(ValueError):
            Image(np.full((2, 2, 3), -0.1))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Image(np.full((1, 1, 1), np.nan))

    def test_rejects_bad_c_max(self):
        with pytest.raises(ConfigError):
            Image(np.zeros((1, 1, 1)), c_max=0.0)

    def test_range_check_escape_hatch(self):
        img = Image(np.full((2, 2, 3), 1.5), check_range=False)
        assert img.data.max() == 1.5


class TestPnmCodec:
    def test_full_scale(self):
        img = decode_image(make_ppm(2, 2, bytes([255] * 12)))
        assert (img.height, img.width, img.channels) == (2, 2, 3)
        assert np.all(img.data == 1.0)

    def test_linear_scaling(self):
        img = decode_image(make_ppm(1, 1, bytes([128, 0, 255])))
        np.testing.assert_array_equal(img.data[0, 0], [128 / 255, 0.0, 1.0])

    def test_truncated_header(self):
        with pytest.raises(FormatError):
            decode_image(b"P6\n2 2")

    def test_truncated_raster(self):
        with pytest.raises(FormatError, match="expected 12 bytes"):
            decode_image(make_ppm(2, 2, bytes(5)))

    def test_header_comments(self):
        data = b"P6\n# comment line\n1 1\n255\n" + bytes([10, 20, 30])
        img = decode_image(data)
        np.testing.assert_allclose(img.data[0, 0], np.array([10, 20, 30]) / 255)

    def test_pgm_grayscale(self):
        img = decode_image(make_ppm(2, 1, bytes([0, 255]), magic=b"P5"))
        assert img.channels == 1
        np.testing.assert_array_equal(img.data[:, :, 0], [[0.0, 1.0]])

    def test_16bit_maxval_unsupported(self):
        with pytest.raises(UnsupportedFormatError):
            decode_image(make_ppm(1, 1, bytes(6), maxval=65535))

    def test_nonnumeric_header(self):
        with pytest.raises(FormatError):
            decode_image(b"P6\nx 2\n255\n" + bytes(12))

    def test_unknown_magic(self):
        with pytest.raises(UnsupportedFormatError):
            decode_image(b"P3\n1 1\n255\n1 2 3")


class TestPngCodec:
    def test_byte_values_survive(self, rng):
        arr = rng.integers(0, 256, size=(5, 7, 3))
        img = decode_image(make_png(arr))
        np.testing.assert_array_equal(img.data * 255, arr)

    def test_grayscale(self):
        arr = np.arange(16).reshape(4, 4) * 17
        img = decode_image(make_png(arr))
        assert img.channels == 1
        np.testing.assert_allclose(img.data[:, :, 0], arr / 255)

    def test_16bit_rgb(self, rng):
        arr = rng.integers(0, 65536, size=(3, 4, 3))
        img = decode_image(make_png(arr, depth=16))
        np.testing.assert_allclose(img.data, arr / 65535)

    def test_16bit_gray(self):
        arr = np.array([[0, 32768], [65535, 1]])
        img = decode_image(make_png(arr, depth=16))
        np.testing.assert_allclose(img.data[:, :, 0], arr / 65535)

    def test_sub_and_up_filters(self, rng):
        arr = rng.integers(0, 256, size=(6, 5, 3))
        img = decode_image(make_png(arr, filters=[0, 1, 2, 1]))
        np.testing.assert_array_equal(img.data * 255, arr)

    def test_pillow_interop(self, rng, tmp_path):
        PIL = pytest.importorskip("PIL.Image")
        arr = rng.integers(0, 256, size=(33, 41, 3), dtype=np.uint8)
        # Pillow encodes (with its own filter heuristics), we decode
        path = tmp_path / "x.png"
        PIL.fromarray(arr, "RGB").save(path)
        img = decode_image(path.read_bytes())
        np.testing.assert_array_equal(img.data * 255, arr)
        # we encode, Pillow decodes
        data = encode_image(Image(arr / 255.0), "png")
        back = np.asarray(PIL.open(__import__("io").BytesIO(data)))
        np.testing.assert_array_equal(back, arr)

    def test_bad_crc(self, rng):
        data = bytearray(make_png(rng.integers(0, 256, size=(2, 2, 3))))
        data[-5] ^= 0xFF  # corrupt IEND's CRC
        with pytest.raises(FormatError, match="CRC"):
            decode_image(bytes(data))

    def test_truncated_chunk(self, rng):
        data = make_png(rng.integers(0, 256, size=(2, 2, 3)))
        with pytest.raises(FormatError, match="truncated"):
            decode_image(data[:20])

    def test_palette_unsupported(self):
        def chunk(ctype, body):
            return struct.pack(">I", len(body)) + ctype + body + struct.pack(
                ">I", zlib.crc32(ctype + body)
            )

        ihdr = struct.pack(">IIBBBBB", 1, 1, 8, 3, 0, 0, 0)
        data = b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", ihdr)
        with pytest.raises(UnsupportedFormatError, match="color type"):
            decode_image(data)

    def test_interlace_unsupported(self):
        def chunk(ctype, body):
            return struct.pack(">I", len(body)) + ctype + body + struct.pack(
                ">I", zlib.crc32(ctype + body)
            )

        ihdr = struct.pack(">IIBBBBB", 1, 1, 8, 2, 0, 0, 1)
        data = b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", ihdr)
        with pytest.raises(UnsupportedFormatError, match="interlaced"):
            decode_image(data)

    def test_unsupported_depth(self):
        def chunk(ctype, body):
            return struct.pack(">I", len(body)) + ctype + body + struct.pack(
                ">I", zlib.crc32(ctype + body)
            )

        ihdr = struct.pack(">IIBBBBB", 1, 1, 4, 0, 0, 0, 0)
        data = b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", ihdr)
        with pytest.raises(UnsupportedFormatError, match="bit depth"):
            decode_image(data)


class TestEncode:
    def test_full_scale_byte(self):
        data = encode_image(Image(np.ones((1, 1, 3))), "ppm")
        assert data[-3:] == bytes([255, 255, 255])

    def test_round_half_up(self):
        data = encode_image(Image(np.full((1, 1, 3), 0.5)), "ppm")
        assert data[-3:] == bytes([128, 128, 128])

    @pytest.mark.parametrize("fmt", ["png", "ppm"])
    def test_all_byte_values_round_trip(self, fmt):
        values = np.arange(256) / 255.0
        img = Image(np.tile(values.reshape(16, 16, 1), (1, 1, 3)))
        back = decode_image(encode_image(img, fmt))
        np.testing.assert_array_equal(back.data, img.data)

    @pytest.mark.parametrize("fmt", ["png", "ppm"])
    def test_random_round_trip_error_bound(self, fmt, rng):
        img = Image(rng.random((9, 13, 3)))
        back = decode_image(encode_image(img, fmt))
        assert np.abs(back.data - img.data).max() <= MAX_QUANT_ERR

    def test_gray_round_trip(self, rng):
        img = Image(rng.random((4, 4, 1)))
        for fmt in ("png", "ppm"):
            back = decode_image(encode_image(img, fmt))
            assert back.channels == 1
            assert np.abs(back.data - img.data).max() <= MAX_QUANT_ERR

    def test_c_max_255_domain(self):
        img = Image(np.array([[[128.0, 0.0, 255.0]]]), c_max=255.0)
        back = decode_image(encode_image(img, "ppm"))
        np.testing.assert_array_equal(back.data[0, 0], [128 / 255, 0.0, 1.0])

    def test_unknown_format(self):
        with pytest.raises(ConfigError):
            encode_image(Image(np.zeros((1, 1, 1))), "bmp")

    @given(st.floats(min_value=0.0, max_value=1.0))
    @settings(max_examples=200, deadline=None)
    def test_quantization_error_bound_exhaustive(self, v):
        img = Image(np.full((1, 1, 1), v))
        back = decode_image(encode_image(img, "ppm"))
        assert abs(back.data[0, 0, 0] - v) <= MAX_QUANT_ERR


class TestDownsample:
    def test_same_size_is_identity(self, rng):
        img = Image(rng.random((5, 6, 3)))
        out = downsample(img, 5, 6)
        assert np.array_equal(out.data, img.data)

    def test_corner_pinning_3x3_to_2x2(self):
        img = Image(np.arange(9.0).reshape(3, 3, 1) / 8.0)
        out = downsample(img, 2, 2)
        np.testing.assert_array_equal(out.data[:, :, 0] * 8.0, [[0.0, 2.0], [6.0, 8.0]])

    def test_matches_naive_oracle(self, rng):
        img = Image(rng.random((4, 4, 3)))
        out = downsample(img, 2, 2)
        np.testing.assert_allclose(out.data, bilinear_resize_naive(img.data, 2, 2), atol=1e-15)

    def test_upsample_matches_naive_oracle(self, rng):
        img = Image(rng.random((3, 5, 3)))
        out = downsample(img, 8, 11)
        np.testing.assert_allclose(out.data, bilinear_resize_naive(img.data, 8, 11), atol=1e-15)

    def test_single_row_target_takes_center(self):
        img = Image(np.array([[0.0], [1.0]])[:, :, None].reshape(2, 1, 1))
        out = downsample(img, 1, 1)
        assert out.data[0, 0, 0] == 0.5

    def test_convex_combination_bounds(self, rng):
        img = Image(0.2 + 0.6 * rng.random((7, 9, 3)))
        out = downsample(img, 3, 4)
        assert out.data.min() >= img.data.min() - 1e-12
        assert out.data.max() <= img.data.max() + 1e-12

    def test_rejects_bad_target(self, rng):
        with pytest.raises(ValueError):
            downsample(Image(rng.random((2, 2, 3))), 0, 2)


class TestGrayscale:
    def test_white_maps_to_one(self):
        out = to_grayscale(Image(np.ones((2, 2, 3))))
        np.testing.assert_allclose(out.data, 1.0, atol=1e-12)

    def test_red_weight(self):
        img = Image(np.tile(np.array([1.0, 0.0, 0.0]), (2, 2, 1)))
        out = to_grayscale(img)
        np.testing.assert_allclose(out.data, 0.299)

    def test_matches_scalar_recomputation(self, rng):
        img = Image(rng.random((3, 4, 3)))
        out = to_grayscale(img)
        for i in range(3):
            for j in range(4):
                r, g, b = img.data[i, j]
                assert out.data[i, j, 0] == pytest.approx(
                    0.299 * r + 0.587 * g + 0.114 * b, abs=1e-15
                )

    def test_rejects_single_channel(self):
        with pytest.raises(ChannelMismatchError):
            to_grayscale(Image(np.zeros((2, 2, 1))))


class TestMatchBrightness:
    def test_identity_when_equal(self, rng):
        img = Image(rng.random((4, 4, 3)))
        out = match_brightness(img, img)
        np.testing.assert_allclose(out.data, img.data, atol=1e-15)

    def test_constant_images(self):
        content = Image(np.full((3, 3, 3), 0.2))
        style = Image(np.full((5, 2, 3), 0.7))
        out = match_brightness(content, style)
        np.testing.assert_allclose(out.data, 0.7, atol=1e-15)

    def test_means_match_without_clamping(self, rng):
        content = Image(0.3 + 0.2 * rng.random((6, 6, 3)))
        style = Image(0.45 + 0.3 * rng.random((4, 8, 3)))
        out = match_brightness(content, style)
        np.testing.assert_allclose(
            out.data.mean(axis=(0, 1)), style.data.mean(axis=(0, 1)), atol=1e-6
        )

    def test_clamps_to_range(self):
        content = Image(np.full((2, 2, 1), 0.9))
        style = Image(np.full((2, 2, 1), 0.99))
        out = match_brightness(content, style)
        assert out.data.max() <= 1.0

    def test_rejects_channel_mismatch(self):
        with pytest.raises(ChannelMismatchError):
            match_brightness(Image(np.zeros((2, 2, 3))), Image(np.zeros((2, 2, 1))))

    def test_rejects_c_max_mismatch(self):
        with pytest.raises(ConfigError):
            match_brightness(Image(np.zeros((2, 2, 1))), Image(np.zeros((2, 2, 1)), c_max=255.0))
