"""Scikit-learn compatible adapters.

Each descriptor is exposed as a stateless transformer mapping a sequence
of images to a 2-D feature matrix, so the extractors drop into sklearn
pipelines; the retriever follows the fit/kneighbors convention of
sklearn.neighbors.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .color_features import (
    DEFAULT_MAX_DISTANCE,
    auto_correlogram,
    naive_signature,
    rgb_histogram,
)
from .keyframe import DEFAULT_THRESHOLD, extract_keyframes
from .retrieval import WeightProfile, combined_rank
from .segmentation import (
    DEFAULT_MAJOR_FRACTION,
    binarize,
    grow_regions,
    major_regions,
    morph_close_open,
)
from .service import EngineConfig, FeatureExtractor
from .texture_features import gabor_features, glcm_features, glcm_matrix, tamura_features
from .validation import as_gray, check_raster_sequence


class ColorHistogramExtractor(BaseEstimator, TransformerMixin):
    """Quantized RGB histograms as (n_samples, 256) count matrix."""

    def fit(self, X, y=None):
        check_raster_sequence(X)
        return self

    def transform(self, X):
        return np.stack([rgb_histogram(r).bins for r in check_raster_sequence(X)]).astype(np.float64)


class CorrelogramExtractor(BaseEstimator, TransformerMixin):
    """HSV auto-correlograms as (n_samples, 256 * max_distance)."""

    def __init__(self, max_distance=DEFAULT_MAX_DISTANCE):
        self.max_distance = max_distance

    def fit(self, X, y=None):
        check_raster_sequence(X)
        return self

    def transform(self, X):
        return np.stack(
            [auto_correlogram(r, self.max_distance).values.ravel() for r in check_raster_sequence(X)]
        )


class NaiveSignatureExtractor(BaseEstimator, TransformerMixin):
    """25-point mean-color signatures as (n_samples, 75)."""

    def fit(self, X, y=None):
        check_raster_sequence(X)
        return self

    def transform(self, X):
        return np.stack([naive_signature(r).points.ravel() for r in check_raster_sequence(X)])


class GlcmFeatureExtractor(BaseEstimator, TransformerMixin):
    """Co-occurrence statistics as (n_samples, 5)."""

    def __init__(self, step=1, correlation_norm="variance", degenerate_correlation=0.0):
        self.step = step
        self.correlation_norm = correlation_norm
        self.degenerate_correlation = degenerate_correlation

    def fit(self, X, y=None):
        check_raster_sequence(X)
        return self

    def transform(self, X):
        rows = []
        for r in check_raster_sequence(X):
            feats = glcm_features(
                glcm_matrix(as_gray(r), self.step),
                correlation_norm=self.correlation_norm,
                degenerate_correlation=self.degenerate_correlation,
            )
            rows.append(feats.values())
        return np.stack(rows)


class GaborFeatureExtractor(BaseEstimator, TransformerMixin):
    """Gabor bank response statistics as (n_samples, 2 * scales * orientations)."""

    def __init__(self, scales=5, orientations=6):
        self.scales = scales
        self.orientations = orientations

    def fit(self, X, y=None):
        check_raster_sequence(X)
        return self

    def transform(self, X):
        return np.stack(
            [
                gabor_features(as_gray(r), self.scales, self.orientations).values
                for r in check_raster_sequence(X)
            ]
        )


class TamuraFeatureExtractor(BaseEstimator, TransformerMixin):
    """Coarseness/contrast/directionality vectors as (n_samples, 18)."""

    def fit(self, X, y=None):
        check_raster_sequence(X)
        return self

    def transform(self, X):
        return np.stack([tamura_features(as_gray(r)).values for r in check_raster_sequence(X)])


class MajorRegionCounter(BaseEstimator, TransformerMixin):
    """Count of large segmented regions as (n_samples, 1)."""

    def __init__(self, min_fraction=DEFAULT_MAJOR_FRACTION):
        self.min_fraction = min_fraction

    def fit(self, X, y=None):
        check_raster_sequence(X)
        return self

    def transform(self, X):
        counts = [
            major_regions(grow_regions(morph_close_open(binarize(as_gray(r)))), self.min_fraction)
            for r in check_raster_sequence(X)
        ]
        return np.array(counts, dtype=np.float64)[:, None]


class KeyFrameSelector(BaseEstimator, TransformerMixin):
    """Reduce an ordered frame sequence to its key frames."""

    def __init__(self, threshold=DEFAULT_THRESHOLD):
        self.threshold = threshold

    def fit(self, X, y=None):
        frames = check_raster_sequence(X)
        self.kept_indices_ = list(extract_keyframes(frames, self.threshold).kept_indices)
        return self

    def transform(self, X):
        frames = check_raster_sequence(X)
        kept = extract_keyframes(frames, self.threshold).kept_indices
        return [frames[i] for i in kept]


class FrameRetriever(BaseEstimator):
    """Query-by-example retriever over a fitted frame corpus.

    fit(X) extracts and indexes the corpus; kneighbors(X) returns combined
    distances and corpus positions, smallest distance first.
    """

    def __init__(self, weights=None, standard_size=None, use_index=True, min_candidates=50):
        self.weights = weights
        self.standard_size = standard_size
        self.use_index = use_index
        self.min_candidates = min_candidates

    def _extractor(self):
        return FeatureExtractor(EngineConfig(standard_size=self.standard_size))

    def fit(self, X, y=None):
        frames = check_raster_sequence(X)
        extractor = self._extractor()
        self.feature_sets_ = [extractor.extract(r) for r in frames]
        self.n_samples_ = len(frames)
        return self

    def _profile(self):
        if self.weights is None:
            return WeightProfile.equal()
        if isinstance(self.weights, WeightProfile):
            return self.weights
        return WeightProfile(tuple(self.weights))

    def kneighbors(self, X, n_neighbors=5):
        if not hasattr(self, "feature_sets_"):
            raise RuntimeError("retriever must be fitted before querying")
        queries = check_raster_sequence(X)
        extractor = self._extractor()
        n_neighbors = min(n_neighbors, self.n_samples_)
        corpus = list(enumerate(self.feature_sets_))
        dists = np.empty((len(queries), n_neighbors))
        idx = np.empty((len(queries), n_neighbors), dtype=np.int64)
        for qi, q in enumerate(queries):
            ranked = combined_rank(
                extractor.extract(q), corpus, weights=self._profile(), k=n_neighbors
            )
            dists[qi] = [r.combined for r in ranked]
            idx[qi] = [r.frame_id for r in ranked]
        return dists, idx

    def predict(self, X):
        """Corpus position of the best match per query image."""
        _, idx = self.kneighbors(X, n_neighbors=1)
        return idx[:, 0]
