"""Ingestion pipeline and query-by-example search over the catalog."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import Catalog, CatalogSnapshot
from .color_features import DEFAULT_MAX_DISTANCE, auto_correlogram, naive_signature, rgb_histogram
from .errors import (
    CorruptImageError,
    EmptyCatalogError,
    EmptyVideoError,
    NoQueriesError,
    UnsupportedFormatError,
)
from .imaging import Raster, load_frame, rescale, to_grayscale
from .keyframe import DEFAULT_THRESHOLD, extract_keyframes
from .range_index import assign_range
from .retrieval import (
    DEFAULT_KS,
    FeatureSet,
    PrecisionReport,
    WeightProfile,
    combined_rank,
    precision_report,
)
from .segmentation import (
    DEFAULT_MAJOR_FRACTION,
    binarize,
    grow_regions,
    major_regions,
    morph_close_open,
)
from .texture_features import gabor_features, glcm_features, glcm_matrix, tamura_features

# Frame file extensions picked up when ingesting a directory.
FRAME_SUFFIXES = (".ppm", ".pgm", ".png", ".jpg", ".jpeg")


@dataclass(frozen=True)
class EngineConfig:
    """Tunables of the extraction and search pipeline."""

    keyframe_threshold: float = DEFAULT_THRESHOLD
    # Frames are rescaled to this size before extraction; None keeps the
    # native resolution.
    standard_size: tuple[int, int] | None = (300, 300)
    correlogram_max_distance: int = DEFAULT_MAX_DISTANCE
    glcm_step: int = 1
    glcm_correlation: str = "variance"
    # Correlation value recorded for zero-variance (flat) key frames.
    glcm_degenerate_correlation: float = 0.0
    major_region_fraction: float = DEFAULT_MAJOR_FRACTION
    min_candidates: int = 50


@dataclass(frozen=True)
class IngestReport:
    v_id: int
    frames_in: int
    key_frames_kept: int
    per_frame_timings_ms: tuple[float, ...]


@dataclass(frozen=True)
class SearchHit:
    frame_id: int
    video_id: int
    video_name: str
    combined: float
    per_feature: dict[str, float] = field(compare=False)


class FeatureExtractor:
    """Extracts the full FeatureSet of one frame."""

    def __init__(self, config: EngineConfig | None = None):
        self.config = config or EngineConfig()

    def extract(self, frame: Raster) -> FeatureSet:
        cfg = self.config
        if cfg.standard_size is not None:
            frame = rescale(frame, cfg.standard_size[0], cfg.standard_size[1])
        gray = to_grayscale(frame)
        histogram = rgb_histogram(frame)
        glcm = glcm_features(
            glcm_matrix(gray, cfg.glcm_step),
            correlation_norm=cfg.glcm_correlation,
            degenerate_correlation=cfg.glcm_degenerate_correlation,
        )
        labeling = grow_regions(morph_close_open(binarize(gray)))
        return FeatureSet(
            histogram=histogram,
            glcm=glcm,
            gabor=gabor_features(gray),
            tamura=tamura_features(gray),
            correlogram=auto_correlogram(frame, cfg.correlogram_max_distance),
            naive=naive_signature(frame),
            major_regions=major_regions(labeling, cfg.major_region_fraction),
            range_key=assign_range(histogram),
        )


class Engine:
    """Ties key-frame extraction, descriptors, index, and catalog together."""

    def __init__(self, catalog: Catalog, config: EngineConfig | None = None):
        self.catalog = catalog
        self.config = config or EngineConfig()
        self.extractor = FeatureExtractor(self.config)

    # -- ingest ---------------------------------------------------------

    def ingest(self, name: str, frames: list[tuple[str, Raster]]) -> IngestReport:
        """Ingest an ordered frame sequence as one video.

        Key frames are selected, their features extracted, and the video
        persisted in a single atomic catalog write: a failure anywhere
        leaves catalog and index untouched.
        """
        if not frames:
            raise EmptyVideoError("no frames to ingest")
        selection = extract_keyframes([r for _, r in frames], self.config.keyframe_threshold)
        keyframes = []
        timings = []
        for idx in selection.kept_indices:
            frame_name, raster = frames[idx]
            t0 = time.perf_counter()
            features = self.extractor.extract(raster)
            timings.append((time.perf_counter() - t0) * 1000.0)
            keyframes.append((frame_name, raster, features))
        v_id = self.catalog.put_video(name, keyframes)
        return IngestReport(
            v_id=v_id,
            frames_in=len(frames),
            key_frames_kept=len(keyframes),
            per_frame_timings_ms=tuple(timings),
        )

    def ingest_files(self, name: str, paths: list[str | Path]) -> IngestReport:
        """Ingest frame files in the given order; a bad file fails the
        whole ingest and names the offending path."""
        frames = []
        for p in paths:
            p = Path(p)
            try:
                frames.append((p.name, load_frame(p.read_bytes())))
            except (CorruptImageError, UnsupportedFormatError, OSError) as e:
                raise CorruptImageError(f"{p}: {e}") from e
        return self.ingest(name, frames)

    def ingest_dir(self, name: str, frame_dir: str | Path) -> IngestReport:
        """Ingest every frame file of a directory in lexicographic order."""
        d = Path(frame_dir)
        paths = sorted(
            p for p in d.iterdir() if p.is_file() and p.suffix.lower() in FRAME_SUFFIXES
        ) if d.is_dir() else []
        if not paths:
            raise EmptyVideoError(f"no frame files in {frame_dir}")
        return self.ingest_files(name, paths)

    # -- search ---------------------------------------------------------

    def _candidate_entries(self, snapshot: CatalogSnapshot, query: FeatureSet, k: int, exhaustive: bool):
        entries = snapshot.entries
        if not exhaustive:
            wanted = max(k, self.config.min_candidates)
            ids = snapshot.buckets.candidates(query.range_key, wanted)
            filtered = [(i, fs) for i, fs, _ in entries if i in ids]
            if filtered:
                return filtered
        return [(i, fs) for i, fs, _ in entries]

    def search(
        self,
        image: Raster | bytes,
        k: int = 20,
        weights: WeightProfile | None = None,
        exhaustive: bool = False,
    ) -> list[SearchHit]:
        """Rank stored key frames against a query image."""
        snapshot = self.catalog.snapshot()
        if not snapshot.entries:
            raise EmptyCatalogError("catalog holds no key frames")
        raster = image if isinstance(image, Raster) else load_frame(image)
        query = self.extractor.extract(raster)
        candidates = self._candidate_entries(snapshot, query, k, exhaustive)
        ranked = combined_rank(query, candidates, weights=weights, k=k)
        videos = snapshot.video_of()
        names = {v.v_id: v.v_name for v in self.catalog.list_videos()}
        return [
            SearchHit(
                frame_id=r.frame_id,
                video_id=videos[r.frame_id],
                video_name=names.get(videos[r.frame_id], ""),
                combined=r.combined,
                per_feature=r.per_feature,
            )
            for r in ranked
        ]

    # -- evaluation -------------------------------------------------------

    def evaluate(
        self,
        queries: list[tuple[Raster | bytes | int, set[int]]],
        ks: tuple[int, ...] = DEFAULT_KS,
        weights: WeightProfile | None = None,
    ) -> PrecisionReport:
        """Precision report over labeled queries; a query may be an image
        or the id of a stored key frame."""
        if not queries:
            raise NoQueriesError("no labeled queries")
        snapshot = self.catalog.snapshot()
        if not snapshot.entries:
            raise EmptyCatalogError("catalog holds no key frames")
        corpus = [(i, fs) for i, fs, _ in snapshot.entries]
        feature_map = snapshot.feature_map()
        labeled = []
        for query, relevant in queries:
            if isinstance(query, int):
                fs = feature_map[query]
            else:
                raster = query if isinstance(query, Raster) else load_frame(query)
                fs = self.extractor.extract(raster)
            labeled.append((fs, set(relevant)))
        return precision_report(corpus, labeled, ks=ks, weights=weights)
