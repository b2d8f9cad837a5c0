"""Content-based video frame retrieval.

Ingests per-video frame sequences, collapses them to key frames, extracts
seven visual descriptors per key frame, indexes frames by histogram range,
and answers query-by-example searches with per-feature and combined
ranking plus precision-at-k evaluation.
"""

from .catalog import Catalog, KeyFrameRecord, VideoRecord, parse_feature, serialize_feature
from .color_features import (
    AutoCorrelogram,
    ColorHistogram,
    NaiveSignature,
    auto_correlogram,
    naive_signature,
    quantize_hsv,
    quantize_rgb,
    rgb_histogram,
)
from .errors import FrameFinderError
from .imaging import (
    BinaryRaster,
    GrayRaster,
    Histogram256,
    Raster,
    decode_pgm,
    decode_ppm,
    encode_pgm,
    encode_ppm,
    gray_histogram,
    load_frame,
    rescale,
    to_grayscale,
)
from .keyframe import KeyFrameSelection, extract_keyframes, frame_distance
from .range_index import RangeBuckets, RangeKey, assign_range
from .retrieval import (
    FeatureSet,
    PrecisionReport,
    RankedResult,
    WeightProfile,
    combined_rank,
    feature_distance,
    precision_at_k,
    precision_report,
)
from .segmentation import (
    RegionLabeling,
    binarize,
    grow_regions,
    major_regions,
    morph_close_open,
)
from .service import Engine, EngineConfig, FeatureExtractor, IngestReport, SearchHit
from .texture_features import (
    GaborVector,
    GlcmFeatures,
    GlcmMatrix,
    TamuraVector,
    gabor_features,
    glcm_features,
    glcm_matrix,
    tamura_features,
)

__version__ = "0.1.0"

__all__ = [
    "AutoCorrelogram",
    "BinaryRaster",
    "Catalog",
    "ColorHistogram",
    "Engine",
    "EngineConfig",
    "FeatureExtractor",
    "FeatureSet",
    "FrameFinderError",
    "GaborVector",
    "GlcmFeatures",
    "GlcmMatrix",
    "GrayRaster",
    "Histogram256",
    "IngestReport",
    "KeyFrameRecord",
    "KeyFrameSelection",
    "NaiveSignature",
    "PrecisionReport",
    "RangeBuckets",
    "RangeKey",
    "RankedResult",
    "Raster",
    "RegionLabeling",
    "SearchHit",
    "TamuraVector",
    "VideoRecord",
    "WeightProfile",
    "assign_range",
    "auto_correlogram",
    "combined_rank",
    "decode_pgm",
    "decode_ppm",
    "encode_pgm",
    "encode_ppm",
    "extract_keyframes",
    "feature_distance",
    "frame_distance",
    "gabor_features",
    "glcm_features",
    "glcm_matrix",
    "gray_histogram",
    "grow_regions",
    "binarize",
    "load_frame",
    "major_regions",
    "morph_close_open",
    "naive_signature",
    "parse_feature",
    "precision_at_k",
    "precision_report",
    "quantize_hsv",
    "quantize_rgb",
    "rescale",
    "rgb_histogram",
    "serialize_feature",
    "tamura_features",
    "to_grayscale",
]
