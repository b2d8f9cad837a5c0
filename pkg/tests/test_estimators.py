import numpy as np
import pytest
from sklearn.pipeline import Pipeline

from conftest import random_raster, solid_raster
from framefinder.estimators import (
    ColorHistogramExtractor,
    CorrelogramExtractor,
    FrameRetriever,
    GaborFeatureExtractor,
    GlcmFeatureExtractor,
    KeyFrameSelector,
    MajorRegionCounter,
    NaiveSignatureExtractor,
    TamuraFeatureExtractor,
)

SIZE = 40


@pytest.fixture
def frames(rng):
    return [random_raster(rng, SIZE, SIZE) for _ in range(4)]


@pytest.mark.parametrize(
    "cls,width",
    [
        (ColorHistogramExtractor, 256),
        (CorrelogramExtractor, 1024),
        (NaiveSignatureExtractor, 75),
        (GlcmFeatureExtractor, 5),
        (GaborFeatureExtractor, 60),
        (TamuraFeatureExtractor, 18),
        (MajorRegionCounter, 1),
    ],
)
def test_transformer_shapes(cls, width, frames):
    est = cls()
    out = est.fit(frames).transform(frames)
    assert out.shape == (4, width)
    assert np.isfinite(out).all()


def test_get_params_round_trip():
    est = CorrelogramExtractor(max_distance=3)
    assert est.get_params() == {"max_distance": 3}
    est.set_params(max_distance=5)
    assert est.max_distance == 5


def test_pipeline_composition(frames):
    pipe = Pipeline([("hist", ColorHistogramExtractor())])
    out = pipe.fit_transform(frames)
    assert out.shape == (4, 256)


def test_accepts_arrays_and_bytes(rng):
    from conftest import ppm_bytes

    arr = rng.integers(0, 256, size=(SIZE, SIZE, 3), dtype=np.uint8)
    out = ColorHistogramExtractor().fit_transform([arr, ppm_bytes(arr)])
    assert (out[0] == out[1]).all()


def test_keyframe_selector(rng):
    a = solid_raster(SIZE, SIZE, (0, 0, 0))
    b = solid_raster(SIZE, SIZE, (255, 255, 255))
    sel = KeyFrameSelector().fit([a, a, a, b, b])
    assert sel.kept_indices_ == [0, 3]
    kept = sel.transform([a, a, a, b, b])
    assert len(kept) == 2


def test_retriever_self_query(rng):
    corpus = [
        solid_raster(SIZE, SIZE, (10, 10, 10)),
        solid_raster(SIZE, SIZE, (200, 60, 60)),
        solid_raster(SIZE, SIZE, (60, 60, 200)),
    ]
    r = FrameRetriever().fit(corpus)
    dists, idx = r.kneighbors([corpus[1]], n_neighbors=2)
    assert idx[0, 0] == 1
    assert dists[0, 0] == 0.0
    assert (r.predict(corpus) == np.arange(3)).all()


def test_retriever_requires_fit(rng):
    with pytest.raises(RuntimeError):
        FrameRetriever().kneighbors([random_raster(rng, SIZE, SIZE)])
