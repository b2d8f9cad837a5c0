"""Key-frame extraction: collapse runs of visually similar consecutive frames.

A frame is compared against the current anchor key frame, not its immediate
predecessor: the anchor is kept, the sweep advances while frames stay within
the threshold, and the first frame that exceeds it becomes the next anchor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySequenceError
from .imaging import Raster, rescale

# All frame comparisons happen at this size so the default threshold keeps
# its meaning regardless of source resolution.
COMPARISON_SIZE = (300, 300)

DEFAULT_THRESHOLD = 800.0


@dataclass(frozen=True)
class KeyFrameSelection:
    """Indices of retained frames plus the threshold that produced them."""

    kept_indices: tuple[int, ...]
    threshold: float

    def __post_init__(self):
        idx = tuple(int(i) for i in self.kept_indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("kept indices must be strictly increasing")
        object.__setattr__(self, "kept_indices", idx)


def _comparison_pixels(r: Raster) -> np.ndarray:
    w, h = COMPARISON_SIZE
    return rescale(r, w, h).pixels.astype(np.float64)


def frame_distance(a: Raster, b: Raster) -> float:
    """Euclidean distance over all RGB channels of both frames rescaled
    to the comparison size. Zero iff the rescaled frames are identical."""
    diff = _comparison_pixels(a) - _comparison_pixels(b)
    return float(np.sqrt(np.sum(diff * diff)))


def extract_keyframes(frames: list[Raster], threshold: float = DEFAULT_THRESHOLD) -> KeyFrameSelection:
    """Greedy anchor sweep over an ordered frame sequence.

    Keep frame i; advance j while distance(frame i, frame j) stays within
    the threshold; the first j exceeding it becomes the next kept frame.
    """
    if len(frames) == 0:
        raise EmptySequenceError("no frames to extract key frames from")
    # Rescale each frame once; the sweep reuses the cached pixels.
    scaled = [_comparison_pixels(f) for f in frames]
    n = len(scaled)
    kept: list[int] = []
    i = 0
    while i < n:
        kept.append(i)
        anchor = scaled[i]
        j = i + 1
        while j < n:
            diff = anchor - scaled[j]
            if float(np.sqrt(np.sum(diff * diff))) > threshold:
                break
            j += 1
        i = j
    return KeyFrameSelection(tuple(kept), float(threshold))
