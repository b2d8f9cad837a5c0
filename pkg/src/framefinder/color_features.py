"""Color descriptors: quantized RGB histogram, HSV auto-correlogram, and
a 25-point grid signature of local mean colors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imaging import Raster, rescale

# 3-3-2 bit allocation over R, G, B gives 256 histogram bins.
RGB_BINS = 256
# HSV quantizer: 16 hue x 4 saturation x 4 value levels.
HSV_HUE_LEVELS = 16
HSV_SAT_LEVELS = 4
HSV_VAL_LEVELS = 4

DEFAULT_MAX_DISTANCE = 4

# Naive signature sampling: 5x5 grid over a 300-pixel base, mean color
# taken over a window of half-width 15 around each grid center.
SIGNATURE_BASE_SIZE = 300
SIGNATURE_SAMPLE_HALF = 15
SIGNATURE_FRACTIONS = (0.1, 0.3, 0.5, 0.7, 0.9)


@dataclass(frozen=True)
class ColorHistogram:
    """Counts over the 256-bin quantized RGB space."""

    bins: np.ndarray  # shape (256,), int64

    def __post_init__(self):
        a = np.asarray(self.bins, dtype=np.int64)
        if a.shape != (RGB_BINS,):
            raise ValueError("color histogram must have exactly 256 bins")
        if (a < 0).any():
            raise ValueError("histogram bins must be non-negative")
        a = np.ascontiguousarray(a)
        a.setflags(write=False)
        object.__setattr__(self, "bins", a)

    @property
    def total(self) -> int:
        return int(self.bins.sum())

    def __eq__(self, other):
        return isinstance(other, ColorHistogram) and np.array_equal(self.bins, other.bins)


@dataclass(frozen=True)
class AutoCorrelogram:
    """Per color bin and distance, the same-color neighbor rate normalized
    so each distance column has maximum 1 (when it has any mass)."""

    values: np.ndarray  # shape (256, max_distance), float64 in [0, 1]

    def __post_init__(self):
        a = np.asarray(self.values, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != RGB_BINS or a.shape[1] < 1:
            raise ValueError("correlogram must be 256 x maxDistance")
        if (a < 0).any() or (a > 1).any():
            raise ValueError("correlogram values must lie in [0, 1]")
        a = np.ascontiguousarray(a)
        a.setflags(write=False)
        object.__setattr__(self, "values", a)

    @property
    def max_distance(self) -> int:
        return self.values.shape[1]

    def __eq__(self, other):
        return isinstance(other, AutoCorrelogram) and np.array_equal(self.values, other.values)


@dataclass(frozen=True)
class NaiveSignature:
    """Mean colors of the 5x5 sampling grid, row-major."""

    points: np.ndarray  # shape (25, 3), float64 in [0, 255]

    def __post_init__(self):
        a = np.asarray(self.points, dtype=np.float64)
        if a.shape != (25, 3):
            raise ValueError("signature must hold exactly 25 RGB points")
        if (a < 0).any() or (a > 255).any():
            raise ValueError("signature channels must lie in [0, 255]")
        a = np.ascontiguousarray(a)
        a.setflags(write=False)
        object.__setattr__(self, "points", a)

    def __eq__(self, other):
        return isinstance(other, NaiveSignature) and np.array_equal(self.points, other.points)


# ---------------------------------------------------------------------------
# Quantizers
# ---------------------------------------------------------------------------

def quantize_rgb(r: int, g: int, b: int) -> int:
    """3-3-2 bit quantizer: (r>>5)<<5 | (g>>5)<<2 | (b>>6)."""
    return (r >> 5) << 5 | (g >> 5) << 2 | (b >> 6)


def _quantize_rgb_array(pixels: np.ndarray) -> np.ndarray:
    p = pixels.astype(np.int64)
    return (p[..., 0] >> 5) << 5 | (p[..., 1] >> 5) << 2 | (p[..., 2] >> 6)


def rgb_histogram(r: Raster) -> ColorHistogram:
    """Count pixels per quantized RGB bin."""
    q = _quantize_rgb_array(r.pixels)
    return ColorHistogram(np.bincount(q.ravel(), minlength=RGB_BINS))


def _rgb_to_hsv_arrays(pixels: np.ndarray):
    """Vectorized RGB -> (H in [0,360), S in [0,1], V in [0,1])."""
    p = pixels.astype(np.float64) / 255.0
    r, g, b = p[..., 0], p[..., 1], p[..., 2]
    mx = p.max(axis=-1)
    mn = p.min(axis=-1)
    delta = mx - mn
    h = np.zeros_like(mx)
    nz = delta > 0
    rmax = nz & (mx == r)
    gmax = nz & (mx == g) & ~rmax
    bmax = nz & ~rmax & ~gmax
    h[rmax] = (60.0 * (g[rmax] - b[rmax]) / delta[rmax]) % 360.0
    h[gmax] = 60.0 * (b[gmax] - r[gmax]) / delta[gmax] + 120.0
    h[bmax] = 60.0 * (r[bmax] - g[bmax]) / delta[bmax] + 240.0
    s = np.where(mx > 0, delta / np.where(mx > 0, mx, 1.0), 0.0)
    return h, s, mx


def _quantize_hsv_arrays(pixels: np.ndarray) -> np.ndarray:
    h, s, v = _rgb_to_hsv_arrays(pixels)
    h_idx = np.floor(h * HSV_HUE_LEVELS / 360.0).astype(np.int64) % HSV_HUE_LEVELS
    s_idx = np.minimum((s * HSV_SAT_LEVELS).astype(np.int64), HSV_SAT_LEVELS - 1)
    v_idx = np.minimum((v * HSV_VAL_LEVELS).astype(np.int64), HSV_VAL_LEVELS - 1)
    return h_idx * (HSV_SAT_LEVELS * HSV_VAL_LEVELS) + s_idx * HSV_VAL_LEVELS + v_idx


def quantize_hsv(r: int, g: int, b: int) -> int:
    """RGB -> HSV, then hue into 16 levels, saturation and value into 4 each.
    Undefined hue (grays) maps to hue level 0."""
    q = _quantize_hsv_arrays(np.array([[r, g, b]], dtype=np.uint8))
    return int(q[0])


# ---------------------------------------------------------------------------
# Auto-correlogram
# ---------------------------------------------------------------------------

def _ring_offsets(d: int):
    """All (dx, dy) at Chebyshev distance exactly d."""
    offsets = []
    for dx in range(-d, d + 1):
        for dy in range(-d, d + 1):
            if max(abs(dx), abs(dy)) == d:
                offsets.append((dx, dy))
    return offsets


def correlogram_counts(r: Raster, max_distance: int = DEFAULT_MAX_DISTANCE) -> np.ndarray:
    """Raw same-color pair counts per (HSV color bin, Chebyshev distance).

    For every pixel and every distance d, counts the in-bounds pixels on the
    ring at distance exactly d that share the pixel's quantized color. Image
    borders truncate rings; there is no wraparound.
    """
    if max_distance < 1:
        raise ValueError("max_distance must be at least 1")
    q = _quantize_hsv_arrays(r.pixels)
    h, w = q.shape
    counts = np.zeros((RGB_BINS, max_distance), dtype=np.int64)
    for d in range(1, max_distance + 1):
        for dx, dy in _ring_offsets(d):
            y0, y1 = max(0, -dy), h - max(0, dy)
            x0, x1 = max(0, -dx), w - max(0, dx)
            if y0 >= y1 or x0 >= x1:
                continue
            src = q[y0:y1, x0:x1]
            nb = q[y0 + dy:y1 + dy, x0 + dx:x1 + dx]
            same = src == nb
            if same.any():
                counts[:, d - 1] += np.bincount(src[same], minlength=RGB_BINS)
    return counts


def auto_correlogram(r: Raster, max_distance: int = DEFAULT_MAX_DISTANCE) -> AutoCorrelogram:
    """Accumulate same-color ring counts, then normalize each distance
    column by its maximum over colors (all-zero columns stay zero)."""
    counts = correlogram_counts(r, max_distance).astype(np.float64)
    col_max = counts.max(axis=0)
    scale = np.where(col_max > 0, col_max, 1.0)
    return AutoCorrelogram(counts / scale)


# ---------------------------------------------------------------------------
# Naive signature
# ---------------------------------------------------------------------------

def naive_signature(r: Raster) -> NaiveSignature:
    """Rescale to the 300-pixel base, then take mean RGB over a 30x30
    window around each of the 25 grid centers (clipped at borders)."""
    base = rescale(r, SIGNATURE_BASE_SIZE, SIGNATURE_BASE_SIZE).pixels.astype(np.float64)
    points = np.empty((25, 3), dtype=np.float64)
    k = 0
    for fy in SIGNATURE_FRACTIONS:
        cy = fy * SIGNATURE_BASE_SIZE
        y0 = max(0, int(cy - SIGNATURE_SAMPLE_HALF))
        y1 = min(SIGNATURE_BASE_SIZE, int(cy + SIGNATURE_SAMPLE_HALF))
        for fx in SIGNATURE_FRACTIONS:
            cx = fx * SIGNATURE_BASE_SIZE
            x0 = max(0, int(cx - SIGNATURE_SAMPLE_HALF))
            x1 = min(SIGNATURE_BASE_SIZE, int(cx + SIGNATURE_SAMPLE_HALF))
            points[k] = base[y0:y1, x0:x1].mean(axis=(0, 1))
            k += 1
    return NaiveSignature(points)
