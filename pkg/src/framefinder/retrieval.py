"""Per-feature distances, combined ranking, and precision-at-k evaluation."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .color_features import AutoCorrelogram, ColorHistogram, NaiveSignature
from .errors import DimensionMismatchError, NoCandidatesError, NoQueriesError
from .range_index import RangeKey
from .texture_features import GaborVector, GlcmFeatures, TamuraVector

# Feature kinds in weight-profile order.
FEATURE_KINDS = ("histogram", "glcm", "gabor", "tamura", "correlogram", "naive", "regions")

# Report columns: (display name, feature kind), combined last.
REPORT_METHODS = (
    ("GLCM", "glcm"),
    ("Gabor", "gabor"),
    ("Tamura", "tamura"),
    ("Histogram", "histogram"),
    ("Autocorrelation", "correlogram"),
    ("Simple Region Growing", "regions"),
    ("Combined", None),
)

DEFAULT_KS = (20, 30, 50, 100)


@dataclass(frozen=True)
class FeatureSet:
    """The seven descriptors of one key frame plus its index range."""

    histogram: ColorHistogram
    glcm: GlcmFeatures
    gabor: GaborVector
    tamura: TamuraVector
    correlogram: AutoCorrelogram
    naive: NaiveSignature
    major_regions: int
    range_key: RangeKey


@dataclass(frozen=True)
class WeightProfile:
    """Non-negative feature weights, normalized to sum 1."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) != len(FEATURE_KINDS):
            raise ValueError(f"expected {len(FEATURE_KINDS)} weights")
        if any(x < 0 for x in w):
            raise ValueError("weights must be non-negative")
        total = sum(w)
        if total <= 0:
            raise ValueError("at least one weight must be positive")
        object.__setattr__(self, "weights", tuple(x / total for x in w))

    @classmethod
    def equal(cls) -> "WeightProfile":
        return cls((1.0,) * len(FEATURE_KINDS))

    @classmethod
    def single(cls, kind: str) -> "WeightProfile":
        if kind not in FEATURE_KINDS:
            raise ValueError(f"unknown feature kind {kind!r}")
        return cls(tuple(1.0 if k == kind else 0.0 for k in FEATURE_KINDS))

    def weight_of(self, kind: str) -> float:
        return self.weights[FEATURE_KINDS.index(kind)]


@dataclass(frozen=True)
class RankedResult:
    """One retrieval hit: raw per-feature distances and the combined score."""

    frame_id: int
    per_feature: dict[str, float] = field(compare=False)
    combined: float = 0.0


def feature_distance(kind: str, a, b) -> float:
    """Raw distance between two feature values of the same kind."""
    if kind == "histogram":
        if not isinstance(a, ColorHistogram) or not isinstance(b, ColorHistogram):
            raise DimensionMismatchError("expected two color histograms")
        return float(np.abs(a.bins / a.total - b.bins / b.total).sum())
    if kind == "correlogram":
        if not isinstance(a, AutoCorrelogram) or not isinstance(b, AutoCorrelogram):
            raise DimensionMismatchError("expected two correlograms")
        if a.values.shape != b.values.shape:
            raise DimensionMismatchError("correlogram distance ranges differ")
        return float(np.abs(a.values - b.values).sum())
    if kind == "glcm":
        if not isinstance(a, GlcmFeatures) or not isinstance(b, GlcmFeatures):
            raise DimensionMismatchError("expected two co-occurrence feature sets")
        d = a.values() - b.values()
        return float(np.sqrt(d @ d))
    if kind == "gabor":
        if not isinstance(a, GaborVector) or not isinstance(b, GaborVector):
            raise DimensionMismatchError("expected two gabor vectors")
        if a.values.shape != b.values.shape:
            raise DimensionMismatchError("gabor vector lengths differ")
        d = a.values - b.values
        return float(np.sqrt(d @ d))
    if kind == "tamura":
        if not isinstance(a, TamuraVector) or not isinstance(b, TamuraVector):
            raise DimensionMismatchError("expected two tamura vectors")
        d = a.values - b.values
        return float(np.sqrt(d @ d))
    if kind == "naive":
        if not isinstance(a, NaiveSignature) or not isinstance(b, NaiveSignature):
            raise DimensionMismatchError("expected two naive signatures")
        return float(np.linalg.norm(a.points - b.points, axis=1).sum())
    if kind == "regions":
        return float(abs(int(a) - int(b)))
    raise ValueError(f"unknown feature kind {kind!r}")


def _feature_value(fs: FeatureSet, kind: str):
    if kind == "regions":
        return fs.major_regions
    return getattr(fs, kind)


def _raw_distance_columns(query: FeatureSet, feature_sets: list[FeatureSet]) -> dict[str, np.ndarray]:
    columns = {}
    for kind in FEATURE_KINDS:
        qv = _feature_value(query, kind)
        columns[kind] = np.array(
            [feature_distance(kind, qv, _feature_value(fs, kind)) for fs in feature_sets],
            dtype=np.float64,
        )
    return columns


def _normalize_column(col: np.ndarray) -> np.ndarray:
    lo, hi = col.min(), col.max()
    if hi - lo <= 0:
        return np.zeros_like(col)
    return (col - lo) / (hi - lo)


def combined_rank(
    query: FeatureSet,
    candidates: list[tuple[int, FeatureSet]],
    weights: WeightProfile | None = None,
    k: int = 20,
) -> list[RankedResult]:
    """Rank candidates by the weighted sum of min-max normalized
    per-feature distances; smallest combined score first, ids break ties."""
    if not candidates:
        raise NoCandidatesError("no candidates to rank")
    if k < 1:
        raise ValueError("k must be at least 1")
    weights = weights or WeightProfile.equal()
    ids = [fid for fid, _ in candidates]
    feature_sets = [fs for _, fs in candidates]
    raw = _raw_distance_columns(query, feature_sets)
    combined = np.zeros(len(candidates), dtype=np.float64)
    for kind, w in zip(FEATURE_KINDS, weights.weights):
        if w > 0:
            combined += w * _normalize_column(raw[kind])
    order = sorted(range(len(ids)), key=lambda i: (combined[i], ids[i]))
    return [
        RankedResult(
            frame_id=ids[i],
            per_feature={kind: float(raw[kind][i]) for kind in FEATURE_KINDS},
            combined=float(combined[i]),
        )
        for i in order[:k]
    ]


def precision_at_k(ranked: list[int], relevant: set[int], k: int) -> float:
    """|top-k intersect relevant| / k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return len(set(ranked[:k]) & set(relevant)) / k


@dataclass(frozen=True)
class PrecisionReport:
    """Mean precision per (method, k), laid out method-per-column."""

    ks: tuple[int, ...]
    methods: tuple[str, ...]
    means: np.ndarray  # shape (len(ks), len(methods))

    def cell(self, k: int, method: str) -> float:
        return float(self.means[self.ks.index(k), self.methods.index(method)])

    def to_text(self) -> str:
        out = io.StringIO()
        label_w = max(len(f"Avg. prec.at {k} frames") for k in self.ks)
        col_w = [max(len(m), 5) for m in self.methods]
        out.write(" " * label_w)
        for m, w in zip(self.methods, col_w):
            out.write("  " + m.rjust(w))
        out.write("\n")
        for i, k in enumerate(self.ks):
            out.write(f"Avg. prec.at {k} frames".ljust(label_w))
            for j, w in enumerate(col_w):
                out.write("  " + f"{self.means[i, j]:.3f}".rjust(w))
            out.write("\n")
        return out.getvalue()

    def to_csv(self) -> str:
        lines = ["k," + ",".join(self.methods)]
        for i, k in enumerate(self.ks):
            lines.append(str(k) + "," + ",".join(f"{v:.6f}" for v in self.means[i]))
        return "\n".join(lines) + "\n"


def precision_report(
    corpus: list[tuple[int, FeatureSet]],
    queries: list[tuple[FeatureSet, set[int]]],
    ks: tuple[int, ...] = DEFAULT_KS,
    weights: WeightProfile | None = None,
) -> PrecisionReport:
    """Mean precision over queries for each single-feature ranking and the
    combined ranking, at every cutoff in ``ks``."""
    if not queries:
        raise NoQueriesError("no labeled queries")
    if not corpus:
        raise NoCandidatesError("empty corpus")
    combined_weights = weights or WeightProfile.equal()
    ids = [fid for fid, _ in corpus]
    feature_sets = [fs for _, fs in corpus]
    sums = np.zeros((len(ks), len(REPORT_METHODS)), dtype=np.float64)
    for query, relevant in queries:
        raw = _raw_distance_columns(query, feature_sets)
        norm = {kind: _normalize_column(raw[kind]) for kind in FEATURE_KINDS}
        for j, (_, kind) in enumerate(REPORT_METHODS):
            if kind is None:
                score = np.zeros(len(ids), dtype=np.float64)
                for fk, w in zip(FEATURE_KINDS, combined_weights.weights):
                    if w > 0:
                        score += w * norm[fk]
            else:
                score = norm[kind]
            order = sorted(range(len(ids)), key=lambda i: (score[i], ids[i]))
            ranked_ids = [ids[i] for i in order]
            for i, k in enumerate(ks):
                sums[i, j] += precision_at_k(ranked_ids, relevant, k)
    return PrecisionReport(
        ks=tuple(int(k) for k in ks),
        methods=tuple(name for name, _ in REPORT_METHODS),
        means=sums / len(queries),
    )
