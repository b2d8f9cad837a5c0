import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from framefinder.color_features import AutoCorrelogram, ColorHistogram, NaiveSignature
from framefinder.imaging import GrayRaster, Raster
from framefinder.range_index import RangeKey
from framefinder.retrieval import FeatureSet
from framefinder.texture_features import GaborVector, GlcmFeatures, TamuraVector


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def make_raster(array) -> Raster:
    return Raster(np.asarray(array, dtype=np.uint8))


def solid_raster(w: int, h: int, color) -> Raster:
    return Raster(np.full((h, w, 3), color, dtype=np.uint8))


def random_raster(rng, w: int, h: int) -> Raster:
    return Raster(rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8))


def random_gray(rng, w: int, h: int) -> GrayRaster:
    return GrayRaster(rng.integers(0, 256, size=(h, w), dtype=np.uint8))


def ppm_bytes(array) -> bytes:
    a = np.asarray(array, dtype=np.uint8)
    return f"P6\n{a.shape[1]} {a.shape[0]}\n255\n".encode() + a.tobytes()


def synth_fs(seed=0, hist_bin=0, regions=1, gabor=None) -> FeatureSet:
    """Synthetic FeatureSet for ranking/persistence tests (no extraction)."""
    rng = np.random.default_rng(seed)
    bins = np.zeros(256, dtype=np.int64)
    bins[hist_bin] = 100
    corr = rng.uniform(0, 1, size=(256, 4))
    corr /= corr.max(axis=0)
    return FeatureSet(
        histogram=ColorHistogram(bins),
        glcm=GlcmFeatures(
            pixel_counter=2,
            asm=float(rng.uniform(0.01, 1)),
            contrast=float(rng.uniform(0, 500)),
            correlation=float(rng.uniform(-1, 1)),
            idm=float(rng.uniform(0.01, 1)),
            entropy=float(rng.uniform(0, 8)),
        ),
        gabor=GaborVector(gabor if gabor is not None else rng.uniform(0, 2, 60)),
        tamura=TamuraVector(np.concatenate([[4.0, 20.0], rng.integers(0, 50, 16)])),
        correlogram=AutoCorrelogram(corr),
        naive=NaiveSignature(rng.uniform(0, 255, size=(25, 3))),
        major_regions=regions,
        range_key=RangeKey(0, 127),
    )


# 256-bin histogram of the published sample query frame; its range
# assignment is documented as (0, 127).
SAMPLE_QUERY_HISTOGRAM = [
    19401, 2570, 1848, 1098, 774, 552, 425, 312, 231, 214, 169, 176, 186, 152,
    174, 157, 149, 128, 128, 125, 126, 136, 118, 131, 130, 110, 141, 125, 134,
    133, 150, 138, 148, 139, 134, 142, 154, 163, 135, 177, 168, 180, 188, 213,
    231, 223, 231, 215, 215, 221, 227, 233, 214, 231, 220, 222, 239, 223, 236,
    236, 239, 264, 255, 226, 267, 344, 350, 381, 457, 443, 446, 434, 526, 512,
    546, 544, 530, 563, 568, 575, 633, 532, 552, 545, 578, 547, 511, 502, 521,
    499, 465, 520, 572, 588, 596, 513, 597, 582, 537, 490, 548, 516, 520, 523,
    552, 562, 610, 567, 592, 624, 631, 601, 699, 695, 804, 828, 929, 819, 841,
    729, 631, 623, 490, 462, 454, 431, 423, 377, 393, 335, 369, 393, 347, 334,
    409, 413, 543, 521, 623, 588, 550, 356, 335, 274, 202, 184, 166, 158, 129,
    146, 136, 126, 123, 117, 117, 110, 87, 92, 101, 107, 115, 112, 133, 154,
    158, 137, 160, 170, 154, 135, 141, 154, 179, 159, 157, 150, 155, 127, 132,
    163, 149, 168, 194, 204, 233, 255, 212, 225, 210, 208, 195, 163, 186, 124,
    153, 126, 123, 138, 120, 139, 92, 110, 96, 95, 95, 64, 86, 97, 81, 96, 109,
    104, 98, 88, 89, 79, 72, 46, 46, 36, 40, 36, 31, 26, 26, 30, 15, 16, 16,
    14, 13, 12, 13, 6, 18, 9, 15, 16, 7, 11, 10, 10, 8, 6, 6, 7, 5, 4, 0, 3,
    2, 0, 1, 5, 0, 0,
]
