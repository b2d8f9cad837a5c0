import numpy as np
import pytest

from conftest import random_raster, solid_raster
from framefinder.errors import EmptySequenceError
from framefinder.keyframe import extract_keyframes, frame_distance
from oracles import keyframe_oracle

BLACK_WHITE_300 = 132501.8867790191  # sqrt(3 * 90000 * 255^2), direct-sum oracle


def test_identical_frames_distance_zero(rng):
    r = random_raster(rng, 20, 20)
    assert frame_distance(r, r) == 0.0


def test_black_white_closed_form():
    d = frame_distance(solid_raster(300, 300, (0, 0, 0)), solid_raster(300, 300, (255, 255, 255)))
    assert d == pytest.approx(BLACK_WHITE_300, abs=1e-6)


def test_distance_symmetry(rng):
    for _ in range(5):
        a, b = random_raster(rng, 9, 7), random_raster(rng, 13, 5)
        assert frame_distance(a, b) == frame_distance(b, a)


def test_distance_rescales_inputs(rng):
    a = random_raster(rng, 10, 10)
    up = random_raster(rng, 10, 10)
    # same image at different stored resolutions compares equal
    from framefinder.imaging import rescale

    assert frame_distance(a, rescale(a, 50, 50)) == pytest.approx(0.0)
    assert up.width == 10


def test_identical_sequence_keeps_first():
    frames = [solid_raster(8, 8, (5, 5, 5))] * 10
    sel = extract_keyframes(frames)
    assert sel.kept_indices == (0,)


def test_alternating_black_white_keeps_all():
    frames = [
        solid_raster(8, 8, (0, 0, 0)) if i % 2 == 0 else solid_raster(8, 8, (255, 255, 255))
        for i in range(8)
    ]
    sel = extract_keyframes(frames)
    assert sel.kept_indices == tuple(range(8))


def test_default_threshold_is_800():
    sel = extract_keyframes([solid_raster(4, 4, (0, 0, 0))])
    assert sel.threshold == 800.0


def test_empty_sequence_raises():
    with pytest.raises(EmptySequenceError):
        extract_keyframes([])


def test_first_kept_index_is_zero(rng):
    frames = [random_raster(rng, 6, 6) for _ in range(12)]
    assert extract_keyframes(frames, threshold=3000.0).kept_indices[0] == 0


def _random_sequence(rng, max_len=50):
    # low-resolution frames drawn from a few "scenes" so sweeps vary
    n = int(rng.integers(1, max_len + 1))
    scenes = [rng.integers(0, 256, size=(4, 4, 3), dtype=np.uint8) for _ in range(3)]
    frames = []
    for _ in range(n):
        base = scenes[int(rng.integers(0, len(scenes)))]
        noise = rng.integers(-6, 7, size=base.shape)
        frames.append(np.clip(base.astype(int) + noise, 0, 255).astype(np.uint8))
    return frames


def test_matches_single_loop_oracle(rng):
    for _ in range(30):
        frames = _random_sequence(rng)
        threshold = float(rng.uniform(100.0, 3000.0))
        from framefinder.imaging import Raster

        got = extract_keyframes([Raster(f) for f in frames], threshold).kept_indices
        want = tuple(keyframe_oracle(frames, threshold))
        assert got == want


def test_threshold_monotonicity(rng):
    from framefinder.imaging import Raster

    for _ in range(10):
        frames = [Raster(f) for f in _random_sequence(rng, max_len=25)]
        counts = [
            len(extract_keyframes(frames, t).kept_indices)
            for t in (100.0, 400.0, 800.0, 1600.0, 6400.0)
        ]
        assert counts == sorted(counts, reverse=True)
