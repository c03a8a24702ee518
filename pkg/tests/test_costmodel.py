from fractions import Fraction

import pytest

from curvegrid import (
    ArchSpec,
    FormatError,
    LayerSpec,
    SLICING_MACS_PER_PIXEL,
    cyclegan_resnet9,
    load_arch,
    macs_fcn,
    macs_mct,
    parse_arch,
)

GEN_MACS_256 = 56_799_264_768  # shipped generator at 256x256, frozen from the formula


def single_conv(in_ch=3, out_ch=64, kernel=7, scale=Fraction(1)):
    return ArchSpec("t", (LayerSpec("conv", in_ch, out_ch, kernel, 1, scale),))


class TestMacsFcn:
    def test_single_conv_formula(self):
        assert macs_fcn(single_conv(), 256, 256) == 3 * 64 * 49 * 65536 == 616_562_688

    def test_scaled_layer(self):
        arch = single_conv(64, 128, 3, Fraction(1, 2))
        assert macs_fcn(arch, 256, 256) == 64 * 128 * 9 * 128 * 128

    def test_resblock_counts_two_convs(self):
        res = ArchSpec("t", (LayerSpec("resblock", 8, 8, 3, 1, Fraction(1)),))
        conv = ArchSpec("t", (LayerSpec("conv", 8, 8, 3, 1, Fraction(1)),))
        assert macs_fcn(res, 32, 32) == 2 * macs_fcn(conv, 32, 32)

    def test_linear_in_pixel_count(self):
        arch = cyclegan_resnet9()
        m1 = macs_fcn(arch, 256, 256)
        assert macs_fcn(arch, 512, 512) == 4 * m1
        assert macs_fcn(arch, 512, 256) == 2 * m1

    def test_4k_ratio_exact(self):
        arch = cyclegan_resnet9()
        ratio = Fraction(macs_fcn(arch, 3840, 2160), macs_fcn(arch, 256, 256))
        assert ratio == Fraction(2025, 16)
        assert float(ratio) == 126.5625

    def test_shipped_generator_reference_costs(self):
        arch = cyclegan_resnet9()
        m256 = macs_fcn(arch, 256, 256)
        assert m256 == GEN_MACS_256
        assert abs(m256 - 56.8e9) <= 0.10 * 56.8e9
        m4k = macs_fcn(arch, 3840, 2160)
        assert abs(m4k - 7.2e12) <= 0.10 * 7.2e12

    def test_incompatible_resolution_raises(self):
        arch = single_conv(1, 1, 1, scale=Fraction(1, 2))
        with pytest.raises(ValueError, match="not divisible"):
            macs_fcn(arch, 3, 3)

    def test_rejects_bad_dims(self):
        with pytest.raises(ValueError):
            macs_fcn(single_conv(), 0, 10)


class TestMacsMct:
    def test_backbone_invariant_in_image_size(self):
        arch = cyclegan_resnet9()
        a = macs_mct(arch, 8, 256, 256, 1920, 1080)
        b = macs_mct(arch, 8, 256, 256, 3840, 2160)
        assert a.backbone == b.backbone == GEN_MACS_256

    def test_head_delta_widens_final_layer(self):
        arch = cyclegan_resnet9()
        cost = macs_mct(arch, 8, 256, 256, 3840, 2160)
        # final 7x7 conv widened 3 -> 72 channels: 23x the original head
        head_macs = 64 * 3 * 49 * 256 * 256
        assert cost.head_delta == head_macs * (72 - 3) // 3 == head_macs * 23
        assert 0.15 <= cost.head_delta / cost.backbone <= 0.35

    def test_slicing_convention(self):
        arch = cyclegan_resnet9()
        cost = macs_mct(arch, 8, 256, 256, 3840, 2160)
        assert cost.slicing == SLICING_MACS_PER_PIXEL * 3840 * 2160 == 597_196_800

    def test_total_is_sum(self):
        cost = macs_mct(cyclegan_resnet9(), 8, 256, 256, 100, 100)
        assert cost.total == cost.backbone + cost.head_delta + cost.slicing

    def test_slicing_share_below_one_percent_at_4k(self):
        cost = macs_mct(cyclegan_resnet9(), 8, 256, 256, 3840, 2160)
        assert cost.slicing / cost.total < 0.01

    def test_variant_cost_fraction_at_4k(self):
        arch = cyclegan_resnet9()
        cost = macs_mct(arch, 8, 256, 256, 3840, 2160)
        assert cost.total / macs_fcn(arch, 3840, 2160) <= 0.011


class TestArchParsing:
    def test_comments_and_blanks(self):
        arch = parse_arch("# header\n\nconv 3 8 3 1 1/1  # inline\n")
        assert len(arch.layers) == 1
        assert arch.head_out_ch == 8

    def test_bare_integer_scale(self):
        arch = parse_arch("conv 3 8 3 1 1\n")
        assert arch.layers[0].at_scale == Fraction(1)

    def test_rejects_bad_kind(self):
        with pytest.raises(FormatError, match="kind"):
            parse_arch("pool 3 8 3 1 1/1\n")

    def test_rejects_wrong_field_count(self):
        with pytest.raises(FormatError, match="6 fields"):
            parse_arch("conv 3 8 3 1\n")

    def test_rejects_bad_scale(self):
        with pytest.raises(FormatError, match="scale"):
            parse_arch("conv 3 8 3 1 a/b\n")
        with pytest.raises(FormatError, match="scale"):
            parse_arch("conv 3 8 3 1 1/0\n")

    def test_rejects_non_integer_field(self):
        with pytest.raises(FormatError):
            parse_arch("conv 3.5 8 3 1 1/1\n")

    def test_rejects_empty(self):
        with pytest.raises(FormatError):
            parse_arch("# nothing here\n")

    def test_rejects_nonpositive_dims(self):
        with pytest.raises(FormatError):
            parse_arch("conv 0 8 3 1 1/1\n")

    def test_load_arch_names_file(self, tmp_path):
        path = tmp_path / "tiny.arch"
        path.write_text("conv 3 8 3 1 1/1\n")
        assert load_arch(path).name == "tiny"

    def test_shipped_file_structure(self):
        arch = cyclegan_resnet9()
        kinds = [layer.kind for layer in arch.layers]
        assert kinds.count("resblock") == 9
        assert kinds.count("conv_transpose") == 2
        assert arch.head_out_ch == 3
