import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_raster, random_raster, solid_raster
from framefinder.color_features import (
    _quantize_hsv_arrays,
    auto_correlogram,
    correlogram_counts,
    naive_signature,
    quantize_hsv,
    quantize_rgb,
    rgb_histogram,
)
from oracles import correlogram_pairs_oracle, naive_window_means_oracle

channel = st.integers(min_value=0, max_value=255)


class TestQuantizeRgb:
    def test_black(self):
        assert quantize_rgb(0, 0, 0) == 0

    def test_white(self):
        assert quantize_rgb(255, 255, 255) == 255

    def test_red(self):
        assert quantize_rgb(255, 0, 0) == 224

    @given(channel, channel, channel)
    @settings(max_examples=60)
    def test_range_and_bit_layout(self, r, g, b):
        q = quantize_rgb(r, g, b)
        assert 0 <= q < 256
        assert q == ((r >> 5) << 5 | (g >> 5) << 2 | (b >> 6))


class TestRgbHistogram:
    def test_all_black(self):
        h = rgb_histogram(solid_raster(10, 10, (0, 0, 0)))
        assert h.bins[0] == 100 and h.bins.sum() == 100

    def test_mass_conservation(self, rng):
        r = random_raster(rng, 17, 11)
        assert rgb_histogram(r).total == 17 * 11

    def test_serialized_header(self):
        from framefinder.catalog import serialize_feature

        line = serialize_feature("histogram", rgb_histogram(solid_raster(2, 2, (0, 0, 0))))
        assert line.startswith("RGB 256 ")


class TestQuantizeHsv:
    def test_black_is_bin_zero(self):
        assert quantize_hsv(0, 0, 0) == 0

    def test_white(self):
        assert quantize_hsv(255, 255, 255) == 3

    def test_pure_red(self):
        assert quantize_hsv(255, 0, 0) == 15

    @given(channel, channel, channel)
    @settings(max_examples=60)
    def test_range(self, r, g, b):
        assert 0 <= quantize_hsv(r, g, b) < 256


class TestAutoCorrelogram:
    def test_uniform_image(self):
        acc = auto_correlogram(solid_raster(6, 6, (255, 0, 0)))
        bin_red = quantize_hsv(255, 0, 0)
        assert (acc.values[bin_red] == 1.0).all()
        mask = np.ones(256, dtype=bool)
        mask[bin_red] = False
        assert (acc.values[mask] == 0.0).all()

    def test_default_distance_serializes_as_acc_4(self, rng):
        from framefinder.catalog import serialize_feature

        line = serialize_feature("correlogram", auto_correlogram(random_raster(rng, 5, 5)))
        assert line.startswith("ACC 4 ")

    def test_2x2_checkerboard_matches_pair_enumeration(self):
        r = make_raster(
            [[[255, 0, 0], [0, 0, 255]], [[0, 0, 255], [255, 0, 0]]]
        )
        got = correlogram_counts(r, 4)
        want = correlogram_pairs_oracle(_quantize_hsv_arrays(r.pixels), 4)
        assert (got == want).all()

    def test_counts_match_oracle_on_small_images(self, rng):
        for _ in range(6):
            r = random_raster(rng, int(rng.integers(2, 9)), int(rng.integers(2, 9)))
            got = correlogram_counts(r, 4)
            want = correlogram_pairs_oracle(_quantize_hsv_arrays(r.pixels), 4)
            assert (got == want).all()

    def test_column_normalization(self, rng):
        acc = auto_correlogram(random_raster(rng, 12, 12))
        assert (acc.values >= 0).all() and (acc.values <= 1).all()
        for d in range(acc.max_distance):
            col = acc.values[:, d]
            if col.any():
                assert col.max() == 1.0


class TestNaiveSignature:
    def test_constant_image(self):
        sig = naive_signature(solid_raster(40, 30, (12, 34, 56)))
        assert np.allclose(sig.points, (12, 34, 56))

    def test_constant_resolution_invariance(self):
        lo = naive_signature(solid_raster(7, 7, (1, 2, 3)))
        hi = naive_signature(solid_raster(500, 400, (1, 2, 3)))
        assert np.allclose(lo.points, hi.points)

    def test_serialized_prefix(self, rng):
        from framefinder.catalog import serialize_feature

        line = serialize_feature("naive", naive_signature(random_raster(rng, 10, 10)))
        assert line.startswith("NaiveVector ")

    def test_left_black_right_white(self):
        a = np.zeros((300, 300, 3), dtype=np.uint8)
        a[:, 150:] = 255
        sig = naive_signature(make_raster(a))
        grid = sig.points.reshape(5, 5, 3)
        assert np.allclose(grid[:, 0], 0)
        assert np.allclose(grid[:, 4], 255)

    def test_window_means_match_oracle(self, rng):
        r = random_raster(rng, 300, 300)
        want = naive_window_means_oracle(r.pixels.astype(np.float64))
        got = naive_signature(r).points
        assert np.allclose(got, want, atol=1e-9)
