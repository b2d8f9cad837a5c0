import math

import numpy as np
import pytest

from conftest import random_gray
from framefinder.errors import (
    DegenerateTextureError,
    ImageTooNarrowError,
    ImageTooSmallError,
)
from framefinder.imaging import GrayRaster
from framefinder.texture_features import (
    GLCM_SIZE,
    gabor_bank,
    gabor_features,
    glcm_features,
    glcm_matrix,
    tamura_features,
)
from oracles import gabor_direct_oracle, glcm_oracle


class TestGlcmMatrix:
    def test_constant_image(self):
        m = glcm_matrix(GrayRaster(np.full((4, 4), 9, dtype=np.uint8)))
        assert m.cells[9, 9] == 1.0
        assert m.cells.sum() == pytest.approx(1.0)

    def test_two_pixel_pair(self):
        m = glcm_matrix(GrayRaster(np.array([[0, 255]], dtype=np.uint8)))
        assert m.pixel_counter == 2
        assert m.cells[0, 255] == 0.5 and m.cells[255, 0] == 0.5

    def test_pixel_counter_formula(self, rng):
        g = random_gray(rng, 12, 7)
        assert glcm_matrix(g, step=1).pixel_counter == 2 * (12 - 1) * 7
        assert glcm_matrix(g, step=3).pixel_counter == 2 * (12 - 3) * 7

    def test_too_narrow(self):
        with pytest.raises(ImageTooNarrowError):
            glcm_matrix(GrayRaster(np.zeros((4, 1), dtype=np.uint8)))

    def test_symmetry_and_mass(self, rng):
        for _ in range(5):
            m = glcm_matrix(random_gray(rng, 8, 8))
            assert np.array_equal(m.cells, m.cells.T)
            assert abs(m.cells.sum() - 1.0) < 1e-9


class TestGlcmFeatures:
    def test_constant_image_statistics(self):
        m = glcm_matrix(GrayRaster(np.full((5, 5), 7, dtype=np.uint8)))
        with pytest.raises(DegenerateTextureError):
            glcm_features(m)
        f = glcm_features(m, degenerate_correlation=0.0)
        assert f.asm == 1.0 and f.contrast == 0.0 and f.idm == 1.0
        assert f.entropy == 0.0 and f.correlation == 0.0

    def test_two_cell_hand_values(self):
        m = glcm_matrix(GrayRaster(np.array([[0, 255]], dtype=np.uint8)))
        f = glcm_features(m)
        assert f.asm == pytest.approx(0.5)
        assert f.entropy == pytest.approx(math.log(2))
        assert f.idm == pytest.approx(1.0 / 65026, rel=1e-12)
        assert f.contrast == pytest.approx(255 ** 2)

    def test_matches_first_principles_oracle(self, rng):
        for _ in range(20):
            g = random_gray(rng, int(rng.integers(2, 5)), int(rng.integers(1, 5)))
            m = glcm_matrix(g)
            _, counter, stats = glcm_oracle(g.pixels)
            f = glcm_features(m, degenerate_correlation=float("nan"))
            assert m.pixel_counter == counter
            tol = dict(rel=1e-12, abs=1e-12)
            assert f.asm == pytest.approx(stats["asm"], **tol)
            assert f.contrast == pytest.approx(stats["contrast"], **tol)
            assert f.idm == pytest.approx(stats["idm"], **tol)
            assert f.entropy == pytest.approx(stats["entropy"], **tol)
            if "correlation" in stats:
                assert f.correlation == pytest.approx(stats["correlation"], **tol)

    def test_standard_correlation_mode(self, rng):
        g = random_gray(rng, 6, 6)
        m = glcm_matrix(g)
        _, _, stats = glcm_oracle(g.pixels)
        f = glcm_features(m, correlation_norm="standard")
        want = stats["correlation"] * math.sqrt(stats["var_x"] * stats["var_y"])
        assert f.correlation == pytest.approx(want, rel=1e-9)

    def test_serialized_line_order(self):
        from framefinder.catalog import serialize_feature

        m = glcm_matrix(GrayRaster(np.array([[0, 255]], dtype=np.uint8)))
        f = glcm_features(m)
        tokens = serialize_feature("glcm", f).split()
        assert len(tokens) == 6
        assert float(tokens[0]) == f.pixel_counter
        assert float(tokens[1]) == f.asm
        assert float(tokens[2]) == f.contrast
        assert float(tokens[3]) == f.correlation
        assert float(tokens[4]) == f.idm
        assert float(tokens[5]) == f.entropy


class TestGabor:
    def test_vector_length_60(self, rng):
        v = gabor_features(random_gray(rng, 40, 40))
        assert v.values.size == 60

    def test_too_small(self):
        with pytest.raises(ImageTooSmallError):
            gabor_features(GrayRaster(np.zeros((30, 40), dtype=np.uint8)))

    def test_constant_image_near_zero_means(self):
        v = gabor_features(GrayRaster(np.full((48, 48), 200, dtype=np.uint8)))
        assert v.values[0::2].max() < 1e-6 * 200

    def test_offset_invariance(self, rng):
        base = rng.integers(40, 120, size=(48, 48), dtype=np.uint8)
        a = gabor_features(GrayRaster(base)).values
        b = gabor_features(GrayRaster(base + 60)).values
        scale = np.abs(a).max()
        assert np.abs(a - b).max() <= 1e-6 * scale

    def test_matches_direct_convolution_oracle(self, rng):
        g = random_gray(rng, 40, 36)
        got = gabor_features(g).values
        want = gabor_direct_oracle(g.pixels, np.asarray(gabor_bank()))
        assert np.allclose(got, want, rtol=1e-9, atol=1e-12)

    def test_orientation_dominance_single_case(self):
        # grating tuned to scale 1, orientation 2 of the bank
        a = (0.4 / 0.05) ** 0.25
        f = 0.4 * a ** -1
        theta = 2 * math.pi / 6
        ys, xs = np.mgrid[0:64, 0:64].astype(np.float64)
        img = 128 + 100 * np.cos(2 * math.pi * f * (xs * math.cos(theta) + ys * math.sin(theta)))
        v = gabor_features(GrayRaster(np.clip(np.round(img), 0, 255).astype(np.uint8)))
        means = v.values[0::2].reshape(5, 6)
        tuned = means[1, 2]
        others = [means[m, n] for m in range(5) for n in range(6) if n != 2]
        assert tuned > max(others)


class TestTamura:
    def test_constant_image(self):
        v = tamura_features(GrayRaster(np.full((32, 32), 77, dtype=np.uint8)))
        assert v.values[0] == 2.0
        assert v.values[1] == 0.0
        assert (v.values[2:] == 0.0).all()

    def test_length_18(self, rng):
        assert tamura_features(random_gray(rng, 40, 40)).values.size == 18

    def test_too_small(self):
        with pytest.raises(ImageTooSmallError):
            tamura_features(GrayRaster(np.zeros((31, 64), dtype=np.uint8)))

    def test_vertical_step_edge_direction(self):
        a = np.zeros((40, 40), dtype=np.uint8)
        a[:, 20:] = 200
        v = tamura_features(GrayRaster(a))
        bins = v.values[2:]
        assert bins.argmax() == 0  # gradient along x -> first bin
        assert bins[0] == bins.sum()

    def test_contrast_reflection_invariance(self, rng):
        g = random_gray(rng, 36, 36)
        a = tamura_features(g).values[1]
        b = tamura_features(GrayRaster(255 - g.pixels)).values[1]
        assert a == pytest.approx(b, abs=1e-9)

    def test_direction_bins_are_counts(self, rng):
        v = tamura_features(random_gray(rng, 40, 40))
        bins = v.values[2:]
        assert np.allclose(bins, np.round(bins))
        assert bins.sum() > 0
