import numpy as np
import pytest

from conftest import random_raster, synth_fs
from framefinder.catalog import (
    Catalog,
    parse_feature,
    parse_sidecar,
    render_sidecar,
    serialize_feature,
)
from framefinder.color_features import AutoCorrelogram, ColorHistogram, NaiveSignature
from framefinder.errors import (
    EmptyVideoError,
    MalformedFeatureStringError,
    NameRequiredError,
    UnknownIdError,
)
from framefinder.texture_features import GaborVector, GlcmFeatures, TamuraVector


def random_feature(rng, kind):
    if kind == "histogram":
        return ColorHistogram(rng.integers(0, 10000, size=256))
    if kind == "glcm":
        return GlcmFeatures(
            pixel_counter=int(rng.integers(2, 10 ** 6)),
            asm=float(rng.uniform(0, 1)),
            contrast=float(rng.uniform(0, 10000)),
            correlation=float(rng.normal()),
            idm=float(rng.uniform(0, 1)),
            entropy=float(rng.uniform(0, 12)),
        )
    if kind == "gabor":
        return GaborVector(rng.uniform(0, 100, size=60))
    if kind == "tamura":
        return TamuraVector(np.concatenate([rng.uniform(0, 5000, 2), rng.integers(0, 20000, 16)]))
    if kind == "correlogram":
        v = rng.uniform(0, 1, size=(256, 4))
        v /= v.max(axis=0)
        return AutoCorrelogram(v)
    if kind == "naive":
        return NaiveSignature(rng.uniform(0, 255, size=(25, 3)))
    raise AssertionError(kind)


class TestSerialization:
    @pytest.mark.parametrize(
        "kind", ["histogram", "glcm", "gabor", "tamura", "correlogram", "naive"]
    )
    def test_round_trip_random_values(self, rng, kind):
        for _ in range(50):
            value = random_feature(rng, kind)
            line = serialize_feature(kind, value)
            back = parse_feature(kind, line)
            assert back == value
            assert serialize_feature(kind, back) == line

    def test_all_black_histogram_line(self):
        bins = np.zeros(256, dtype=np.int64)
        bins[0] = 1
        line = serialize_feature("histogram", ColorHistogram(bins))
        assert line == "RGB 256 1" + " 0" * 255

    def test_gabor_prefix(self, rng):
        line = serialize_feature("gabor", random_feature(rng, "gabor"))
        assert line.split()[:2] == ["gabor", "60"]

    def test_zero_tamura_parses(self):
        line = "Tamura 18 " + " ".join(["0"] * 18)
        v = parse_feature("tamura", line)
        assert (v.values == 0).all()

    def test_count_mismatch(self):
        with pytest.raises(MalformedFeatureStringError):
            parse_feature("histogram", "RGB 256 " + " ".join(["1"] * 255))

    def test_wrong_prefix(self):
        with pytest.raises(MalformedFeatureStringError):
            parse_feature("gabor", "Gabor 60 " + " ".join(["0"] * 60))

    def test_non_numeric_token(self):
        with pytest.raises(MalformedFeatureStringError):
            parse_feature("naive", "NaiveVector " + " ".join(["x"] * 75))

    def test_glcm_six_values_no_prefix(self, rng):
        line = serialize_feature("glcm", random_feature(rng, "glcm"))
        assert len(line.split()) == 6


def put_fixture(catalog, rng, name="clip", n=2, seed0=0):
    keyframes = [
        (f"frame{j:03d}.ppm", random_raster(rng, 8, 8), synth_fs(seed0 + j))
        for j in range(n)
    ]
    return catalog.put_video(name, keyframes)


class TestCatalog:
    def test_put_then_get_round_trip(self, tmp_path, rng):
        cat = Catalog(tmp_path)
        v_id = put_fixture(cat, rng)
        video = cat.get_video(v_id)
        assert video.v_id == v_id and video.v_name == "clip"
        assert len(video.keyframe_ids) == 2
        recs = cat.keyframes_of(v_id)
        assert [r.i_id for r in recs] == list(video.keyframe_ids)
        assert recs[0].feature_set() == cat.features_of(recs[0].i_id)

    def test_delete_then_get_unknown(self, tmp_path, rng):
        cat = Catalog(tmp_path)
        v_id = put_fixture(cat, rng)
        cat.delete_video(v_id)
        with pytest.raises(UnknownIdError):
            cat.get_video(v_id)

    def test_find_by_name_substring(self, tmp_path, rng):
        cat = Catalog(tmp_path)
        put_fixture(cat, rng, name="alpha one")
        target = put_fixture(cat, rng, name="beta two", seed0=10)
        put_fixture(cat, rng, name="gamma three", seed0=20)
        found = cat.find_by_name("eta tw")
        assert [v.v_id for v in found] == [target]

    def test_empty_name_rejected(self, tmp_path, rng):
        cat = Catalog(tmp_path)
        with pytest.raises(NameRequiredError):
            put_fixture(cat, rng, name="  ")

    def test_empty_video_rejected(self, tmp_path):
        cat = Catalog(tmp_path)
        with pytest.raises(EmptyVideoError):
            cat.put_video("x", [])

    def test_referential_integrity_on_delete(self, tmp_path, rng):
        cat = Catalog(tmp_path)
        v1 = put_fixture(cat, rng)
        v2 = put_fixture(cat, rng, seed0=5)
        kf1 = [r.i_id for r in cat.keyframes_of(v1)]
        cat.delete_video(v1)
        assert all(cat.buckets.key_of(i) is None for i in kf1)
        for i in kf1:
            with pytest.raises(UnknownIdError):
                cat.get_keyframe(i)
        assert len(cat.all_keyframes()) == len(cat.keyframes_of(v2))

    def test_ids_monotonic_across_reload(self, tmp_path, rng):
        cat = Catalog(tmp_path)
        v1 = put_fixture(cat, rng)
        cat.delete_video(v1)
        cat2 = Catalog(tmp_path)
        v2 = put_fixture(cat2, rng, seed0=9)
        assert v2 > v1

    def test_reload_reproduces_byte_identical_sidecars_and_buckets(self, tmp_path, rng):
        cat = Catalog(tmp_path)
        put_fixture(cat, rng, n=3)
        sidecars = sorted(tmp_path.glob("videos/*/frames/*.features.txt"))
        original = {p: p.read_bytes() for p in sidecars}

        cat2 = Catalog(tmp_path)
        assert cat2.buckets == cat.buckets
        for p in sidecars:
            rec = parse_sidecar(p.read_text())
            assert render_sidecar(rec).encode() == original[p]
            rec2 = cat2.get_keyframe(rec.i_id)
            assert render_sidecar(rec2).encode() == original[p]

    def test_reload_preserves_owning_video(self, tmp_path, rng):
        cat = Catalog(tmp_path)
        v1 = put_fixture(cat, rng, name="one")
        v2 = put_fixture(cat, rng, name="two", seed0=7)
        cat2 = Catalog(tmp_path)
        for v_id in (v1, v2):
            for rec in cat2.keyframes_of(v_id):
                assert rec.v_id == v_id
        assert {v for _, _, v in cat2.snapshot().entries} == {v1, v2}

    def test_frame_image_round_trip(self, tmp_path, rng):
        cat = Catalog(tmp_path)
        frame = random_raster(rng, 9, 5)
        v_id = cat.put_video("img", [("f.ppm", frame, synth_fs())])
        i_id = cat.get_video(v_id).keyframe_ids[0]
        assert cat.frame_image(i_id) == frame

    def test_failed_staging_leaves_catalog_unchanged(self, tmp_path, rng, monkeypatch):
        cat = Catalog(tmp_path)
        put_fixture(cat, rng)
        before = sorted(p.relative_to(tmp_path) for p in tmp_path.rglob("*") if p.is_file())
        videos_before = [v.v_id for v in cat.list_videos()]

        def boom(*a, **kw):
            raise OSError("disk full")

        monkeypatch.setattr(cat, "_stage_video", boom)
        with pytest.raises(OSError):
            put_fixture(cat, rng, name="doomed", seed0=50)
        monkeypatch.undo()
        after = sorted(p.relative_to(tmp_path) for p in tmp_path.rglob("*") if p.is_file())
        assert after == before
        assert [v.v_id for v in cat.list_videos()] == videos_before
        assert len(cat.buckets) == 2

    def test_snapshot_isolated_from_writes(self, tmp_path, rng):
        cat = Catalog(tmp_path)
        v1 = put_fixture(cat, rng)
        snap = cat.snapshot()
        put_fixture(cat, rng, name="later", seed0=30)
        cat.delete_video(v1)
        assert len(snap.entries) == 2
        assert {v for _, _, v in snap.entries} == {v1}
