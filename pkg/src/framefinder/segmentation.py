"""Binarization, morphological cleanup, and stack-based region growing.

The preprocessing chain mirrors the extraction pipeline: grayscale input is
binarized at the minimum-fuzziness threshold, cleaned with a close-then-open
pass, and segmented into connected regions of equal binary value.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import binary_dilation, binary_erosion

from .imaging import BinaryRaster, GrayRaster, gray_histogram

# 5x5 mask with the center 3x3 set; effectively a 3x3 structuring element.
MORPH_KERNEL = np.array(
    [
        [0, 0, 0, 0, 0],
        [0, 1, 1, 1, 0],
        [0, 1, 1, 1, 0],
        [0, 1, 1, 1, 0],
        [0, 0, 0, 0, 0],
    ],
    dtype=np.uint8,
)
MORPH_KERNEL.setflags(write=False)

DEFAULT_MAJOR_FRACTION = 0.05


@dataclass(frozen=True)
class RegionLabeling:
    """Per-pixel region ids (1-based, in seed scan order) plus counts."""

    labels: np.ndarray  # shape (h, w), int32, values 1..number_of_regions
    number_of_regions: int
    num_holes: int
    region_sizes: dict[int, int]

    def __post_init__(self):
        a = np.ascontiguousarray(np.asarray(self.labels, dtype=np.int32))
        a.setflags(write=False)
        object.__setattr__(self, "labels", a)


def _entropy_term(u: np.ndarray) -> np.ndarray:
    """Shannon fuzziness -u ln u - (1-u) ln(1-u), zero at u=1."""
    u = np.clip(u, 1e-12, 1.0)
    v = np.clip(1.0 - u, 1e-12, 1.0)
    out = -(u * np.log(u) + v * np.log(v))
    out[u >= 1.0 - 1e-12] = 0.0
    return out


def min_fuzziness_threshold(hist: np.ndarray) -> int:
    """Threshold in [0, 255] minimizing total membership fuzziness.

    For a candidate t the pixels at or below t belong to the lower region
    and the rest to the upper one; membership of intensity g is
    1 / (1 + |g - region mean| / C) with C the intensity range. Ties pick
    the smallest threshold.
    """
    hist = np.asarray(hist, dtype=np.float64)
    nz = np.flatnonzero(hist)
    if nz.size == 0:
        raise ValueError("histogram has no mass")
    gmin, gmax = int(nz[0]), int(nz[-1])
    if gmin == gmax:
        return gmin
    c = float(gmax - gmin)
    g = np.arange(256, dtype=np.float64)
    n0 = np.cumsum(hist)
    s0 = np.cumsum(hist * g)
    total_n, total_s = n0[-1], s0[-1]
    mu0 = np.where(n0 > 0, s0 / np.maximum(n0, 1.0), 0.0)
    n1 = total_n - n0
    mu1 = np.where(n1 > 0, (total_s - s0) / np.maximum(n1, 1.0), 0.0)

    low = g[None, :] <= g[:, None]  # low[t, g]: g belongs to the lower region
    mu = np.where(low, mu0[:, None], mu1[:, None])
    member = 1.0 / (1.0 + np.abs(g[None, :] - mu) / c)
    fuzz = (hist[None, :] * _entropy_term(member)).sum(axis=1)
    return int(np.argmin(fuzz))


def binarize(g: GrayRaster) -> BinaryRaster:
    """Minimum-fuzziness threshold; pixels above it map to 1."""
    t = min_fuzziness_threshold(gray_histogram(g).bins)
    return BinaryRaster((g.pixels > t).astype(np.uint8))


def morph_close_open(b: BinaryRaster) -> BinaryRaster:
    """Dilate, erode, erode, dilate with the 5x5 kernel.

    Dilation assumes background outside the image; erosion ignores the
    outside (so constant images are fixed points).
    """
    k = MORPH_KERNEL.astype(bool)
    a = b.pixels.astype(bool)
    a = binary_dilation(a, structure=k, border_value=0)
    a = binary_erosion(a, structure=k, border_value=1)
    a = binary_erosion(a, structure=k, border_value=1)
    a = binary_dilation(a, structure=k, border_value=0)
    return BinaryRaster(a.astype(np.uint8))


def grow_regions(b: BinaryRaster) -> RegionLabeling:
    """Label connected regions of equal value by stack-based growing.

    Scans row-major; every unlabeled pixel seeds a new region grown over
    its 8-connected equal-valued neighbors. Regions whose value is 0 are
    counted as holes.
    """
    h, w = b.pixels.shape
    pixels = b.pixels.tolist()
    labels = [[0] * w for _ in range(h)]
    sizes: dict[int, int] = {}
    regions = 0
    holes = 0
    for sy in range(h):
        row = labels[sy]
        for sx in range(w):
            if row[sx]:
                continue
            regions += 1
            if pixels[sy][sx] == 0:
                holes += 1
            value = pixels[sy][sx]
            row[sx] = regions
            count = 1
            todo = deque(((sx, sy),))
            while todo:
                x, y = todo.popleft()
                for ny in (y - 1, y, y + 1):
                    if ny < 0 or ny >= h:
                        continue
                    prow = pixels[ny]
                    lrow = labels[ny]
                    for nx in (x - 1, x, x + 1):
                        if nx < 0 or nx >= w:
                            continue
                        if lrow[nx] == 0 and prow[nx] == value:
                            lrow[nx] = regions
                            count += 1
                            todo.append((nx, ny))
            sizes[regions] = count
    return RegionLabeling(
        labels=np.array(labels, dtype=np.int32),
        number_of_regions=regions,
        num_holes=holes,
        region_sizes=sizes,
    )


def major_regions(labeling: RegionLabeling, min_fraction: float = DEFAULT_MAJOR_FRACTION) -> int:
    """Number of regions covering at least min_fraction of the image."""
    total = labeling.labels.size
    cutoff = min_fraction * total
    return sum(1 for size in labeling.region_sizes.values() if size >= cutoff)
