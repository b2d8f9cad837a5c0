"""Histogram range-finder index.

Each frame is assigned the deepest intensity range, out of the fixed tree
root (0,255) -> halves -> quarters -> eighths, that still holds enough
histogram mass. Ranges act as buckets for candidate prefiltering at query
time, widened toward the root until enough candidates are collected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DuplicateFrameError, EmptyHistogramError

LEVEL1_THRESHOLD = 55.0
DEEPER_THRESHOLD = 60.0

_VALID_WIDTHS = (256, 128, 64, 32)


@dataclass(frozen=True, order=True)
class RangeKey:
    """One node of the range tree: an intensity interval [min, max]."""

    min: int
    max: int

    def __post_init__(self):
        width = self.max - self.min + 1
        if width not in _VALID_WIDTHS or self.min % width != 0:
            raise ValueError(f"({self.min}, {self.max}) is not a tree range")

    @property
    def width(self) -> int:
        return self.max - self.min + 1

    def parent(self) -> "RangeKey":
        if self.width == 256:
            return self
        parent_width = self.width * 2
        lo = (self.min // parent_width) * parent_width
        return RangeKey(lo, lo + parent_width - 1)

    def contains(self, other: "RangeKey") -> bool:
        return self.min <= other.min and other.max <= self.max


ROOT_RANGE = RangeKey(0, 255)


def tree_ranges() -> list[RangeKey]:
    """All 15 ranges of the index tree, root first."""
    out = []
    for width in _VALID_WIDTHS:
        out.extend(RangeKey(lo, lo + width - 1) for lo in range(0, 256, width))
    return out


def assign_range(
    histogram,
    level1_threshold: float = LEVEL1_THRESHOLD,
    deeper_threshold: float = DEEPER_THRESHOLD,
) -> RangeKey:
    """Descend the range tree while enough percentage mass accumulates.

    Level 1 picks the half holding more than ``level1_threshold`` percent
    (low half preferred, otherwise the high half). Each deeper level
    descends into the first half of the current range whose percentage
    exceeds ``deeper_threshold``, stopping when neither qualifies.
    """
    bins = np.asarray(getattr(histogram, "bins", histogram), dtype=np.float64)
    if bins.shape != (256,):
        raise ValueError("expected a 256-bin histogram")
    total = bins.sum()
    if total <= 0:
        raise EmptyHistogramError("histogram has zero mass")

    def pct(lo: int, hi: int) -> float:
        return 100.0 * bins[lo:hi + 1].sum() / total

    if pct(0, 127) > level1_threshold:
        lo, hi = 0, 127
    else:
        lo, hi = 128, 255
    for _ in range(2):
        half = (hi - lo + 1) // 2
        if pct(lo, lo + half - 1) > deeper_threshold:
            hi = lo + half - 1
        elif pct(lo + half, hi) > deeper_threshold:
            lo = lo + half
        else:
            break
    return RangeKey(lo, hi)


class RangeBuckets:
    """Frame ids grouped by their RangeKey; each id lives in one bucket."""

    def __init__(self):
        self._buckets: dict[RangeKey, set[int]] = {}
        self._assigned: dict[int, RangeKey] = {}

    def __len__(self) -> int:
        return len(self._assigned)

    def __eq__(self, other) -> bool:
        return isinstance(other, RangeBuckets) and self._assigned == other._assigned

    def insert(self, frame_id: int, key: RangeKey) -> None:
        if frame_id in self._assigned:
            raise DuplicateFrameError(f"frame {frame_id} already bucketed")
        self._assigned[frame_id] = key
        self._buckets.setdefault(key, set()).add(frame_id)

    def remove(self, frame_id: int) -> None:
        key = self._assigned.pop(frame_id, None)
        if key is not None:
            bucket = self._buckets[key]
            bucket.discard(frame_id)
            if not bucket:
                del self._buckets[key]

    def key_of(self, frame_id: int) -> RangeKey | None:
        return self._assigned.get(frame_id)

    def bucket(self, key: RangeKey) -> frozenset:
        return frozenset(self._buckets.get(key, ()))

    def candidates(self, query_key: RangeKey, min_candidates: int) -> set[int]:
        """Frames of the query bucket, widened to parent ranges until at
        least ``min_candidates`` are collected or the root is reached."""
        current = query_key
        result = set(self._buckets.get(current, ()))
        while len(result) < min_candidates and current != ROOT_RANGE:
            current = current.parent()
            result = set()
            for key, ids in self._buckets.items():
                if current.contains(key):
                    result |= ids
        return result

    def copy(self) -> "RangeBuckets":
        dup = RangeBuckets()
        dup._assigned = dict(self._assigned)
        dup._buckets = {k: set(v) for k, v in self._buckets.items()}
        return dup
