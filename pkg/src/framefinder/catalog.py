"""Embedded catalog: video/key-frame records persisted as a directory tree,
plus the line-oriented feature string formats.

Layout under the data directory::

    state.txt                   id counters
    videos/v000007/manifest.txt one manifest per video
    videos/v000007/frames/      key-frame images (binary pixmaps) and one
                                feature sidecar per key frame

Catalog writes are atomic per call: a video is staged under tmp/ and
renamed into place, so a crash mid-put leaves no partial video visible.
"""

from __future__ import annotations

import os
import shutil
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .color_features import AutoCorrelogram, ColorHistogram, NaiveSignature, RGB_BINS
from .errors import (
    EmptyVideoError,
    MalformedFeatureStringError,
    NameRequiredError,
    UnknownIdError,
)
from .imaging import Raster, decode_ppm, encode_ppm
from .range_index import RangeBuckets, RangeKey
from .retrieval import FeatureSet
from .texture_features import GaborVector, GlcmFeatures, TamuraVector

FEATURE_STRING_KINDS = ("histogram", "glcm", "gabor", "tamura", "correlogram", "naive")

_SIDECAR_FEATURE_KEYS = {
    "sch": "histogram",
    "glcm": "glcm",
    "gabor": "gabor",
    "tamura": "tamura",
    "acc": "correlogram",
    "naive": "naive",
}


def _fmt(x: float) -> str:
    """Shortest representation that round-trips through float()."""
    return repr(float(x))


def _parse_floats(tokens: list[str], kind: str) -> list[float]:
    try:
        return [float(t) for t in tokens]
    except ValueError as e:
        raise MalformedFeatureStringError(f"non-numeric token in {kind} line") from e


def serialize_feature(kind: str, value) -> str:
    """Render one feature value as its persisted text line."""
    if kind == "histogram":
        return "RGB 256 " + " ".join(str(int(b)) for b in value.bins)
    if kind == "glcm":
        return " ".join(
            _fmt(x)
            for x in (
                value.pixel_counter,
                value.asm,
                value.contrast,
                value.correlation,
                value.idm,
                value.entropy,
            )
        )
    if kind == "gabor":
        v = value.values
        return f"gabor {v.size} " + " ".join(_fmt(x) for x in v)
    if kind == "tamura":
        v = value.values
        return f"Tamura {v.size} " + " ".join(_fmt(x) for x in v)
    if kind == "correlogram":
        v = value.values
        return f"ACC {v.shape[1]} " + " ".join(_fmt(x) for x in v.ravel())
    if kind == "naive":
        return "NaiveVector " + " ".join(_fmt(x) for x in value.points.ravel())
    raise ValueError(f"unknown feature kind {kind!r}")


def parse_feature(kind: str, text: str):
    """Exact inverse of serialize_feature."""
    tokens = text.split()
    if kind == "histogram":
        if tokens[:2] != ["RGB", "256"] or len(tokens) != 2 + RGB_BINS:
            raise MalformedFeatureStringError("histogram line must be 'RGB 256' plus 256 counts")
        try:
            bins = [int(t) for t in tokens[2:]]
        except ValueError as e:
            raise MalformedFeatureStringError("non-integer histogram count") from e
        return ColorHistogram(np.array(bins, dtype=np.int64))
    if kind == "glcm":
        if len(tokens) != 6:
            raise MalformedFeatureStringError("glcm line must hold exactly 6 values")
        vals = _parse_floats(tokens, "glcm")
        return GlcmFeatures(
            pixel_counter=int(vals[0]),
            asm=vals[1],
            contrast=vals[2],
            correlation=vals[3],
            idm=vals[4],
            entropy=vals[5],
        )
    if kind == "gabor":
        if len(tokens) < 2 or tokens[0] != "gabor" or not tokens[1].isdigit():
            raise MalformedFeatureStringError("gabor line must start with 'gabor <count>'")
        n = int(tokens[1])
        if len(tokens) != 2 + n:
            raise MalformedFeatureStringError(f"gabor line declares {n} values")
        return GaborVector(np.array(_parse_floats(tokens[2:], "gabor")))
    if kind == "tamura":
        if len(tokens) < 2 or tokens[0] != "Tamura" or not tokens[1].isdigit():
            raise MalformedFeatureStringError("tamura line must start with 'Tamura <count>'")
        n = int(tokens[1])
        if len(tokens) != 2 + n:
            raise MalformedFeatureStringError(f"tamura line declares {n} values")
        return TamuraVector(np.array(_parse_floats(tokens[2:], "tamura")))
    if kind == "correlogram":
        if len(tokens) < 2 or tokens[0] != "ACC" or not tokens[1].isdigit():
            raise MalformedFeatureStringError("correlogram line must start with 'ACC <distance>'")
        d = int(tokens[1])
        if d < 1 or len(tokens) != 2 + RGB_BINS * d:
            raise MalformedFeatureStringError(f"correlogram line must hold 256*{d} values")
        vals = np.array(_parse_floats(tokens[2:], "correlogram"))
        return AutoCorrelogram(vals.reshape(RGB_BINS, d))
    if kind == "naive":
        if not tokens or tokens[0] != "NaiveVector" or len(tokens) != 1 + 75:
            raise MalformedFeatureStringError("naive line must be 'NaiveVector' plus 75 values")
        vals = np.array(_parse_floats(tokens[1:], "naive"))
        return NaiveSignature(vals.reshape(25, 3))
    raise ValueError(f"unknown feature kind {kind!r}")


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VideoRecord:
    v_id: int
    v_name: str
    frame_dir: str
    ingested_at: str
    keyframe_ids: tuple[int, ...]


@dataclass(frozen=True)
class KeyFrameRecord:
    i_id: int
    i_name: str
    image_path: str
    range_key: RangeKey
    sch: str
    glcm: str
    gabor: str
    tamura: str
    acc: str
    naive: str
    major_regions: int
    v_id: int

    @property
    def min(self) -> int:
        return self.range_key.min

    @property
    def max(self) -> int:
        return self.range_key.max

    def feature_set(self) -> FeatureSet:
        return FeatureSet(
            histogram=parse_feature("histogram", self.sch),
            glcm=parse_feature("glcm", self.glcm),
            gabor=parse_feature("gabor", self.gabor),
            tamura=parse_feature("tamura", self.tamura),
            correlogram=parse_feature("correlogram", self.acc),
            naive=parse_feature("naive", self.naive),
            major_regions=self.major_regions,
            range_key=self.range_key,
        )


def record_from_features(
    i_id: int,
    i_name: str,
    image_path: str,
    features: FeatureSet,
    v_id: int,
) -> KeyFrameRecord:
    return KeyFrameRecord(
        i_id=i_id,
        i_name=i_name,
        image_path=image_path,
        range_key=features.range_key,
        sch=serialize_feature("histogram", features.histogram),
        glcm=serialize_feature("glcm", features.glcm),
        gabor=serialize_feature("gabor", features.gabor),
        tamura=serialize_feature("tamura", features.tamura),
        acc=serialize_feature("correlogram", features.correlogram),
        naive=serialize_feature("naive", features.naive),
        major_regions=features.major_regions,
        v_id=v_id,
    )


def render_manifest(video: VideoRecord) -> str:
    return (
        f"v_id {video.v_id}\n"
        f"v_name {video.v_name}\n"
        f"ingested_at {video.ingested_at}\n"
        f"keyframes {' '.join(str(i) for i in video.keyframe_ids)}\n"
    )


def render_sidecar(rec: KeyFrameRecord) -> str:
    return (
        f"i_id {rec.i_id}\n"
        f"i_name {rec.i_name}\n"
        f"image {rec.image_path}\n"
        f"v_id {rec.v_id}\n"
        f"min {rec.range_key.min}\n"
        f"max {rec.range_key.max}\n"
        f"majorregions {rec.major_regions}\n"
        f"sch {rec.sch}\n"
        f"glcm {rec.glcm}\n"
        f"gabor {rec.gabor}\n"
        f"tamura {rec.tamura}\n"
        f"acc {rec.acc}\n"
        f"naive {rec.naive}\n"
    )


def _parse_kv_lines(text: str, what: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition(" ")
        fields[key] = value
    if not fields:
        raise MalformedFeatureStringError(f"empty {what}")
    return fields


def parse_sidecar(text: str) -> KeyFrameRecord:
    f = _parse_kv_lines(text, "sidecar")
    try:
        return KeyFrameRecord(
            i_id=int(f["i_id"]),
            i_name=f["i_name"],
            image_path=f["image"],
            range_key=RangeKey(int(f["min"]), int(f["max"])),
            sch=f["sch"],
            glcm=f["glcm"],
            gabor=f["gabor"],
            tamura=f["tamura"],
            acc=f["acc"],
            naive=f["naive"],
            major_regions=int(f["majorregions"]),
            v_id=int(f["v_id"]),
        )
    except KeyError as e:
        raise MalformedFeatureStringError(f"sidecar missing field {e}") from e


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

class Catalog:
    """Single-writer, multi-reader store of videos and their key frames.

    Mutations serialize through an internal lock; ``snapshot()`` hands
    readers a consistent view that later writes cannot disturb.
    """

    def __init__(self, data_dir: str | os.PathLike):
        self.data_dir = Path(data_dir)
        self._lock = threading.RLock()
        self._videos: dict[int, VideoRecord] = {}
        self._keyframes: dict[int, KeyFrameRecord] = {}
        self._feature_cache: dict[int, FeatureSet] = {}
        self._buckets = RangeBuckets()
        self._next_v_id = 1
        self._next_i_id = 1
        self._load()

    # -- paths --------------------------------------------------------------

    @property
    def _videos_dir(self) -> Path:
        return self.data_dir / "videos"

    @property
    def _tmp_dir(self) -> Path:
        return self.data_dir / "tmp"

    def _video_dir(self, v_id: int) -> Path:
        return self._videos_dir / f"v{v_id:06d}"

    def frame_image_name(self, i_id: int) -> str:
        return f"kf{i_id:06d}.ppm"

    def _sidecar_name(self, i_id: int) -> str:
        return f"kf{i_id:06d}.features.txt"

    # -- persistence --------------------------------------------------------

    def _load(self) -> None:
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._videos_dir.mkdir(exist_ok=True)
        self._tmp_dir.mkdir(exist_ok=True)
        shutil.rmtree(self._tmp_dir, ignore_errors=True)
        self._tmp_dir.mkdir(exist_ok=True)
        state = self.data_dir / "state.txt"
        if state.exists():
            f = _parse_kv_lines(state.read_text(), "state file")
            self._next_v_id = int(f["next_v_id"])
            self._next_i_id = int(f["next_i_id"])
        for vdir in sorted(self._videos_dir.iterdir()):
            manifest = vdir / "manifest.txt"
            if not manifest.is_file():
                continue
            f = _parse_kv_lines(manifest.read_text(), "manifest")
            kf_ids = tuple(int(t) for t in f["keyframes"].split())
            video = VideoRecord(
                v_id=int(f["v_id"]),
                v_name=f["v_name"],
                frame_dir=str(vdir / "frames"),
                ingested_at=f["ingested_at"],
                keyframe_ids=kf_ids,
            )
            self._videos[video.v_id] = video
            for i_id in kf_ids:
                sidecar = vdir / "frames" / self._sidecar_name(i_id)
                rec = parse_sidecar(sidecar.read_text())
                self._keyframes[rec.i_id] = rec
                self._buckets.insert(rec.i_id, rec.range_key)

    def _write_state(self) -> None:
        tmp = self._tmp_dir / f"state-{uuid.uuid4().hex}.txt"
        tmp.write_text(f"next_v_id {self._next_v_id}\nnext_i_id {self._next_i_id}\n")
        os.replace(tmp, self.data_dir / "state.txt")

    def _stage_video(self, video: VideoRecord, records, images) -> Path:
        """Write the video's directory under tmp/; renamed into place by put."""
        staging = self._tmp_dir / f"put-{uuid.uuid4().hex}"
        try:
            frames = staging / "frames"
            frames.mkdir(parents=True)
            (staging / "manifest.txt").write_text(render_manifest(video))
            for rec, image in zip(records, images):
                (frames / rec.image_path).write_bytes(encode_ppm(image))
                (frames / self._sidecar_name(rec.i_id)).write_text(render_sidecar(rec))
        except BaseException:
            shutil.rmtree(staging, ignore_errors=True)
            raise
        return staging

    # -- operations ---------------------------------------------------------

    def put_video(self, name: str, keyframes: list[tuple[str, Raster, FeatureSet]]) -> int:
        """Persist a video with its key frames; atomic, returns the new v_id.

        ``keyframes`` holds (frame name, image, extracted features) in
        presentation order.
        """
        if not name or not name.strip():
            raise NameRequiredError("video name must be non-empty")
        if not keyframes:
            raise EmptyVideoError("a video needs at least one key frame")
        with self._lock:
            v_id = self._next_v_id
            i_ids = list(range(self._next_i_id, self._next_i_id + len(keyframes)))

            records = [
                record_from_features(
                    i_id, i_name, self.frame_image_name(i_id), features, v_id
                )
                for i_id, (i_name, _, features) in zip(i_ids, keyframes)
            ]
            video = VideoRecord(
                v_id=v_id,
                v_name=name,
                frame_dir=str(self._video_dir(v_id) / "frames"),
                ingested_at=datetime.now(timezone.utc).isoformat(),
                keyframe_ids=tuple(i_ids),
            )
            images = [image for _, image, _ in keyframes]
            # Stage first (invisible, fully rollback-free), claim the ids,
            # then rename into place. A crash before the rename at worst
            # skips ids; it never exposes a partial video or reuses an id.
            staging = self._stage_video(video, records, images)
            self._next_v_id += 1
            self._next_i_id += len(keyframes)
            self._write_state()
            os.replace(staging, self._video_dir(v_id))

            self._videos[v_id] = video
            for rec, (_, _, features) in zip(records, keyframes):
                self._keyframes[rec.i_id] = rec
                self._feature_cache[rec.i_id] = features
                self._buckets.insert(rec.i_id, rec.range_key)
            return v_id

    def get_video(self, v_id: int) -> VideoRecord:
        video = self._videos.get(v_id)
        if video is None:
            raise UnknownIdError(f"no video with id {v_id}")
        return video

    def delete_video(self, v_id: int) -> None:
        """Remove the video, its key frames, and their index entries."""
        with self._lock:
            video = self.get_video(v_id)
            vdir = self._video_dir(v_id)
            doomed = self._tmp_dir / f"del-{uuid.uuid4().hex}"
            os.replace(vdir, doomed)
            shutil.rmtree(doomed, ignore_errors=True)
            for i_id in video.keyframe_ids:
                self._keyframes.pop(i_id, None)
                self._feature_cache.pop(i_id, None)
                self._buckets.remove(i_id)
            del self._videos[v_id]

    def list_videos(self) -> list[VideoRecord]:
        return [self._videos[v] for v in sorted(self._videos)]

    def find_by_name(self, substring: str) -> list[VideoRecord]:
        needle = substring.lower()
        return [v for v in self.list_videos() if needle in v.v_name.lower()]

    def keyframes_of(self, v_id: int) -> list[KeyFrameRecord]:
        video = self.get_video(v_id)
        return [self._keyframes[i] for i in video.keyframe_ids]

    def all_keyframes(self) -> list[KeyFrameRecord]:
        return [self._keyframes[i] for i in sorted(self._keyframes)]

    def get_keyframe(self, i_id: int) -> KeyFrameRecord:
        rec = self._keyframes.get(i_id)
        if rec is None:
            raise UnknownIdError(f"no key frame with id {i_id}")
        return rec

    def frame_image(self, i_id: int) -> Raster:
        rec = self.get_keyframe(i_id)
        path = Path(self.get_video(rec.v_id).frame_dir) / rec.image_path
        return decode_ppm(path.read_bytes())

    def features_of(self, i_id: int) -> FeatureSet:
        fs = self._feature_cache.get(i_id)
        if fs is None:
            fs = self.get_keyframe(i_id).feature_set()
            self._feature_cache[i_id] = fs
        return fs

    @property
    def buckets(self) -> RangeBuckets:
        return self._buckets

    def snapshot(self) -> "CatalogSnapshot":
        """Consistent read view: feature sets, owning videos, and buckets."""
        with self._lock:
            entries = tuple(
                (i_id, self.features_of(i_id), self._keyframes[i_id].v_id)
                for i_id in sorted(self._keyframes)
            )
            return CatalogSnapshot(entries=entries, buckets=self._buckets.copy())

    def __len__(self) -> int:
        return len(self._videos)


@dataclass(frozen=True)
class CatalogSnapshot:
    """Immutable view used by searches: (i_id, features, v_id) triples."""

    entries: tuple[tuple[int, FeatureSet, int], ...]
    buckets: RangeBuckets

    def feature_map(self) -> dict[int, FeatureSet]:
        return {i_id: fs for i_id, fs, _ in self.entries}

    def video_of(self) -> dict[int, int]:
        return {i_id: v_id for i_id, _, v_id in self.entries}
