"""Texture descriptors: gray-level co-occurrence statistics, a Gabor
wavelet filter-bank vector, and coarseness/contrast/directionality."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.ndimage import uniform_filter
from scipy.signal import fftconvolve

from .errors import DegenerateTextureError, ImageTooNarrowError, ImageTooSmallError
from .imaging import GrayRaster

# Co-occurrence matrix side; intensities occupy 0..255, the extra row and
# column stay zero but are kept so serialized statistics never change if
# the historical allocation is assumed elsewhere.
GLCM_SIZE = 257

GABOR_SCALES = 5
GABOR_ORIENTATIONS = 6
GABOR_FREQ_LOW = 0.05
GABOR_FREQ_HIGH = 0.4
GABOR_HALF_SIZE = 15  # kernel support is (2*15+1)^2 = 31x31

TAMURA_LENGTH = 18
TAMURA_SCALES = 5  # coarseness windows 2^k, k = 1..5
TAMURA_DIRECTION_BINS = 16
TAMURA_GRADIENT_THRESHOLD = 12.0
TAMURA_MIN_SIZE = 32


@dataclass(frozen=True)
class GlcmMatrix:
    """Symmetric, unit-mass co-occurrence matrix at a horizontal offset."""

    cells: np.ndarray  # shape (257, 257), float64
    pixel_counter: int

    def __post_init__(self):
        a = np.asarray(self.cells, dtype=np.float64)
        if a.shape != (GLCM_SIZE, GLCM_SIZE):
            raise ValueError("co-occurrence matrix must be 257 x 257")
        if not np.array_equal(a, a.T):
            raise ValueError("co-occurrence matrix must be symmetric")
        if abs(a.sum() - 1.0) > 1e-9:
            raise ValueError("co-occurrence matrix mass must be 1")
        a = np.ascontiguousarray(a)
        a.setflags(write=False)
        object.__setattr__(self, "cells", a)
        object.__setattr__(self, "pixel_counter", int(self.pixel_counter))


@dataclass(frozen=True)
class GlcmFeatures:
    """The five co-occurrence statistics plus the pair count that
    normalized the matrix."""

    pixel_counter: int
    asm: float
    contrast: float
    correlation: float
    idm: float
    entropy: float

    def values(self) -> np.ndarray:
        """Statistic vector used for distance computation."""
        return np.array(
            [self.asm, self.contrast, self.correlation, self.idm, self.entropy],
            dtype=np.float64,
        )


@dataclass(frozen=True)
class GaborVector:
    """Interleaved (mean, std) of filter response magnitudes, scale-major:
    values[2(mN+n)] and values[2(mN+n)+1] for scale m, orientation n."""

    values: np.ndarray  # shape (2*M*N,), float64, non-negative

    def __post_init__(self):
        a = np.asarray(self.values, dtype=np.float64)
        if a.ndim != 1 or a.size == 0 or a.size % 2:
            raise ValueError("gabor vector length must be 2*M*N")
        if (a < 0).any():
            raise ValueError("gabor vector entries must be non-negative")
        a = np.ascontiguousarray(a)
        a.setflags(write=False)
        object.__setattr__(self, "values", a)

    def __eq__(self, other):
        return isinstance(other, GaborVector) and np.array_equal(self.values, other.values)


@dataclass(frozen=True)
class TamuraVector:
    """[coarseness, contrast, 16-bin direction histogram]."""

    values: np.ndarray  # shape (18,), float64

    def __post_init__(self):
        a = np.asarray(self.values, dtype=np.float64)
        if a.shape != (TAMURA_LENGTH,):
            raise ValueError("tamura vector must have 18 entries")
        if (a[2:] < 0).any():
            raise ValueError("direction bins must be non-negative")
        a = np.ascontiguousarray(a)
        a.setflags(write=False)
        object.__setattr__(self, "values", a)

    def __eq__(self, other):
        return isinstance(other, TamuraVector) and np.array_equal(self.values, other.values)


# ---------------------------------------------------------------------------
# Gray-level co-occurrence
# ---------------------------------------------------------------------------

def glcm_matrix(g: GrayRaster, step: int = 1) -> GlcmMatrix:
    """Count horizontal intensity pairs (x, y)-(x+step, y), both orders,
    then normalize by the number of counted pairs.

    Pairs that would read past the right edge are excluded, so the pair
    count is 2*(width-step)*height.
    """
    if step < 1:
        raise ValueError("step must be at least 1")
    if g.width <= step:
        raise ImageTooNarrowError(f"width {g.width} must exceed step {step}")
    a = g.pixels[:, :-step].astype(np.int64)
    b = g.pixels[:, step:].astype(np.int64)
    counts = np.bincount((a * GLCM_SIZE + b).ravel(), minlength=GLCM_SIZE * GLCM_SIZE)
    counts = counts + np.bincount((b * GLCM_SIZE + a).ravel(), minlength=GLCM_SIZE * GLCM_SIZE)
    pixel_counter = 2 * a.size
    return GlcmMatrix(counts.reshape(GLCM_SIZE, GLCM_SIZE) / pixel_counter, pixel_counter)


def glcm_features(
    m: GlcmMatrix,
    correlation_norm: str = "variance",
    degenerate_correlation: float | None = None,
) -> GlcmFeatures:
    """Compute ASM, contrast, correlation, inverse difference moment and
    entropy (natural log) from a normalized co-occurrence matrix.

    ``correlation_norm="variance"`` divides the covariance by the product
    of the marginal variances; ``"standard"`` divides by the product of
    their square roots. A zero-variance marginal leaves correlation
    undefined: raises DegenerateTextureError unless
    ``degenerate_correlation`` supplies a sentinel value.
    """
    if correlation_norm not in ("variance", "standard"):
        raise ValueError("correlation_norm must be 'variance' or 'standard'")
    p = m.cells
    idx = np.arange(GLCM_SIZE, dtype=np.float64)
    pa = p.sum(axis=1)
    pb = p.sum(axis=0)
    mu_x = float(idx @ pa)
    mu_y = float(idx @ pb)
    var_x = float(((idx - mu_x) ** 2) @ pa)
    var_y = float(((idx - mu_y) ** 2) @ pb)

    asm = float((p * p).sum())
    diff = idx[:, None] - idx[None, :]
    contrast = float((diff * diff * p).sum())
    idm = float((p / (1.0 + diff * diff)).sum())
    nz = p[p > 0]
    entropy = float(-(nz * np.log(nz)).sum())

    denom = var_x * var_y
    if denom == 0.0:
        if degenerate_correlation is None:
            raise DegenerateTextureError("correlation undefined for zero-variance texture")
        correlation = float(degenerate_correlation)
    else:
        cov = float((((idx - mu_x)[:, None]) * ((idx - mu_y)[None, :]) * p).sum())
        if correlation_norm == "standard":
            denom = math.sqrt(var_x) * math.sqrt(var_y)
        correlation = cov / denom
    return GlcmFeatures(
        pixel_counter=m.pixel_counter,
        asm=asm,
        contrast=contrast,
        correlation=correlation,
        idm=idm,
        entropy=max(entropy, 0.0),
    )


# ---------------------------------------------------------------------------
# Gabor filter bank
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def gabor_bank(
    scales: int = GABOR_SCALES,
    orientations: int = GABOR_ORIENTATIONS,
    freq_low: float = GABOR_FREQ_LOW,
    freq_high: float = GABOR_FREQ_HIGH,
    half_size: int = GABOR_HALF_SIZE,
) -> np.ndarray:
    """Complex Gabor wavelet kernels, shape (scales, orientations, k, k).

    Center frequencies are log-spaced over [freq_low, freq_high]; the
    frequency-domain spreads follow the usual half-peak touching design.
    The real part of each kernel is shifted to zero mean so the filters
    have no DC response.
    """
    if scales < 2:
        raise ValueError("need at least two scales")
    a = (freq_high / freq_low) ** (1.0 / (scales - 1))
    sqrt_2ln2 = math.sqrt(2.0 * math.log(2.0))
    size = 2 * half_size + 1
    ys, xs = np.mgrid[-half_size:half_size + 1, -half_size:half_size + 1].astype(np.float64)
    kernels = np.empty((scales, orientations, size, size), dtype=np.complex128)
    for m in range(scales):
        f = freq_high * a ** (-m)
        sigma_u = (a - 1.0) * f / ((a + 1.0) * sqrt_2ln2)
        sigma_v = math.tan(math.pi / (2.0 * orientations)) * math.sqrt(
            f * f / (2.0 * math.log(2.0)) - sigma_u * sigma_u
        )
        sigma_x = 1.0 / (2.0 * math.pi * sigma_u)
        sigma_y = 1.0 / (2.0 * math.pi * sigma_v)
        for n in range(orientations):
            theta = n * math.pi / orientations
            xr = xs * math.cos(theta) + ys * math.sin(theta)
            yr = -xs * math.sin(theta) + ys * math.cos(theta)
            env = np.exp(-0.5 * ((xr / sigma_x) ** 2 + (yr / sigma_y) ** 2))
            env /= 2.0 * math.pi * sigma_x * sigma_y
            k = env * np.exp(2j * math.pi * f * xr)
            k = k - k.real.mean()
            kernels[m, n] = k
    kernels.setflags(write=False)
    return kernels


def gabor_features(
    g: GrayRaster,
    scales: int = GABOR_SCALES,
    orientations: int = GABOR_ORIENTATIONS,
) -> GaborVector:
    """Mean and deviation of response magnitude for every bank filter.

    Responses are evaluated where the full kernel fits (valid region, no
    padding). Both statistics are divided by the total image size:
    mean = sum|response| / (w*h) and
    std  = sqrt(sum(|response| - mean)^2) / (w*h).
    """
    size = 2 * GABOR_HALF_SIZE + 1
    if g.width < size or g.height < size:
        raise ImageTooSmallError(f"image must be at least {size}x{size}")
    img = g.pixels.astype(np.float64)
    image_size = float(g.width * g.height)
    bank = gabor_bank(scales, orientations)
    values = np.empty(2 * scales * orientations, dtype=np.float64)
    for m in range(scales):
        for n in range(orientations):
            mag = np.abs(fftconvolve(img, bank[m, n], mode="valid"))
            mean = mag.sum() / image_size
            dev = math.sqrt(((mag - mean) ** 2).sum()) / image_size
            i = 2 * (m * orientations + n)
            values[i] = mean
            values[i + 1] = dev
    return GaborVector(values)


# ---------------------------------------------------------------------------
# Coarseness / contrast / directionality
# ---------------------------------------------------------------------------

def _shifted(a: np.ndarray, offset: int, axis: int) -> np.ndarray:
    """a shifted by offset along axis with border replication."""
    n = a.shape[axis]
    idx = np.clip(np.arange(n) + offset, 0, n - 1)
    return np.take(a, idx, axis=axis)


def tamura_features(g: GrayRaster) -> TamuraVector:
    """Coarseness, contrast, and a 16-bin direction-count histogram.

    Coarseness averages, over all pixels, the window size 2^k (k = 1..5)
    whose neighborhood-average difference is largest, ties going to the
    smallest window. Contrast is sigma / kurtosis^(1/4). Directionality
    bins gradient angles of pixels whose magnitude reaches the threshold;
    raw counts are kept.
    """
    if g.width < TAMURA_MIN_SIZE or g.height < TAMURA_MIN_SIZE:
        raise ImageTooSmallError(f"image must be at least {TAMURA_MIN_SIZE}x{TAMURA_MIN_SIZE}")
    img = g.pixels.astype(np.float64)

    # Coarseness.
    diffs = np.empty((TAMURA_SCALES,) + img.shape, dtype=np.float64)
    for k in range(1, TAMURA_SCALES + 1):
        size = 2 ** k
        half = size // 2
        avg = uniform_filter(img, size=size, mode="nearest")
        dh = np.abs(_shifted(avg, half, axis=1) - _shifted(avg, -half, axis=1))
        dv = np.abs(_shifted(avg, half, axis=0) - _shifted(avg, -half, axis=0))
        diffs[k - 1] = np.maximum(dh, dv)
    best_k = diffs.argmax(axis=0)  # first max, so ties pick the smallest k
    coarseness = float((2.0 ** (best_k + 1)).mean())

    # Contrast.
    sigma = float(img.std())
    if sigma == 0.0:
        return TamuraVector(np.array([coarseness, 0.0] + [0.0] * TAMURA_DIRECTION_BINS))
    m4 = float(((img - img.mean()) ** 4).mean())
    kurtosis = m4 / sigma ** 4
    contrast = sigma / kurtosis ** 0.25

    # Directionality: Sobel gradients on the interior.
    p = img
    gx = (
        (p[:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:])
        - (p[:-2, :-2] + 2.0 * p[1:-1, :-2] + p[2:, :-2])
    )
    gy = (
        (p[2:, :-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:])
        - (p[:-2, :-2] + 2.0 * p[:-2, 1:-1] + p[:-2, 2:])
    )
    mag = np.hypot(gx, gy)
    strong = mag >= TAMURA_GRADIENT_THRESHOLD
    bins = np.zeros(TAMURA_DIRECTION_BINS, dtype=np.float64)
    if strong.any():
        theta = np.mod(np.arctan2(gy[strong], gx[strong]), np.pi)
        idx = np.minimum(
            (theta / np.pi * TAMURA_DIRECTION_BINS).astype(np.int64),
            TAMURA_DIRECTION_BINS - 1,
        )
        bins = np.bincount(idx, minlength=TAMURA_DIRECTION_BINS).astype(np.float64)
    return TamuraVector(np.concatenate(([coarseness, contrast], bins)))
