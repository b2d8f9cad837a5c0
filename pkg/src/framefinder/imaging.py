"""Pixel-grid types, decoding, rescaling, grayscale conversion and histograms.

Everything downstream (key-frame selection, descriptors, segmentation)
operates on the three raster types defined here. Binary portable pixmaps
(P6) and graymaps (P5) are decoded and encoded bit-exactly in pure Python;
PNG/JPEG are handled through an optional Pillow adapter.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CorruptImageError,
    InvalidDimensionsError,
    UnsupportedFormatError,
)

# BT.601 luma weights, applied as R, G, B.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Raster:
    """Row-major RGB pixel grid, channels in [0, 255]."""

    pixels: np.ndarray  # shape (height, width, 3), uint8

    def __post_init__(self):
        a = np.asarray(self.pixels)
        if a.ndim != 3 or a.shape[2] != 3:
            raise ValueError("Raster pixels must have shape (h, w, 3)")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise InvalidDimensionsError("raster dimensions must be positive")
        if a.dtype != np.uint8:
            if a.min() < 0 or a.max() > 255:
                raise ValueError("channel values must be in [0, 255]")
            a = a.astype(np.uint8)
        object.__setattr__(self, "pixels", _frozen(a))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        return isinstance(other, Raster) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True)
class GrayRaster:
    """Row-major intensity grid in [0, 255]."""

    pixels: np.ndarray  # shape (height, width), uint8

    def __post_init__(self):
        a = np.asarray(self.pixels)
        if a.ndim != 2:
            raise ValueError("GrayRaster pixels must have shape (h, w)")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise InvalidDimensionsError("raster dimensions must be positive")
        if a.dtype != np.uint8:
            if a.min() < 0 or a.max() > 255:
                raise ValueError("intensities must be in [0, 255]")
            a = a.astype(np.uint8)
        object.__setattr__(self, "pixels", _frozen(a))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        return isinstance(other, GrayRaster) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True)
class BinaryRaster:
    """Row-major grid of {0, 1} values."""

    pixels: np.ndarray  # shape (height, width), uint8 in {0, 1}

    def __post_init__(self):
        a = np.asarray(self.pixels)
        if a.ndim != 2:
            raise ValueError("BinaryRaster pixels must have shape (h, w)")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise InvalidDimensionsError("raster dimensions must be positive")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("binary raster values must be exactly 0 or 1")
        object.__setattr__(self, "pixels", _frozen(a.astype(np.uint8)))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        return isinstance(other, BinaryRaster) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True)
class Histogram256:
    """256-bin intensity histogram; total equals the source pixel count."""

    bins: np.ndarray = field()  # shape (256,), non-negative int64

    def __post_init__(self):
        a = np.asarray(self.bins, dtype=np.int64)
        if a.shape != (256,):
            raise ValueError("histogram must have exactly 256 bins")
        if (a < 0).any():
            raise ValueError("histogram bins must be non-negative")
        object.__setattr__(self, "bins", _frozen(a))

    @property
    def total(self) -> int:
        return int(self.bins.sum())

    def __eq__(self, other):
        return isinstance(other, Histogram256) and np.array_equal(self.bins, other.bins)


# ---------------------------------------------------------------------------
# Portable pixmap / graymap codec (binary P6 / P5, 8-bit)
# ---------------------------------------------------------------------------

def _parse_pnm_header(data: bytes, magic: bytes):
    """Return (width, height, offset of raster data). Comments allowed."""
    if not data.startswith(magic):
        raise UnsupportedFormatError(f"not a {magic.decode()} pixmap")
    pos = 2
    fields = []
    while len(fields) < 3:
        if pos >= len(data):
            raise CorruptImageError("truncated pixmap header")
        c = data[pos:pos + 1]
        if c == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise CorruptImageError("truncated pixmap comment")
            pos = nl + 1
        elif c.isspace():
            pos += 1
        else:
            end = pos
            while end < len(data) and not data[end:end + 1].isspace():
                end += 1
            token = data[pos:end]
            if not token.isdigit():
                raise CorruptImageError(f"bad pixmap header token {token!r}")
            fields.append(int(token))
            pos = end
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise CorruptImageError("missing whitespace after pixmap header")
    pos += 1
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise CorruptImageError("pixmap dimensions must be positive")
    if maxval != 255:
        raise UnsupportedFormatError(f"only 8-bit pixmaps supported (maxval {maxval})")
    return width, height, pos


def decode_ppm(data: bytes) -> Raster:
    """Decode a binary P6 pixmap."""
    w, h, pos = _parse_pnm_header(data, b"P6")
    need = w * h * 3
    raster = data[pos:pos + need]
    if len(raster) < need:
        raise CorruptImageError("truncated pixmap data")
    return Raster(np.frombuffer(raster, dtype=np.uint8).reshape(h, w, 3))


def encode_ppm(r: Raster) -> bytes:
    """Encode as binary P6; inverse of decode_ppm for canonical output."""
    header = f"P6\n{r.width} {r.height}\n255\n".encode("ascii")
    return header + r.pixels.tobytes()


def decode_pgm(data: bytes) -> GrayRaster:
    """Decode a binary P5 graymap."""
    w, h, pos = _parse_pnm_header(data, b"P5")
    need = w * h
    raster = data[pos:pos + need]
    if len(raster) < need:
        raise CorruptImageError("truncated graymap data")
    return GrayRaster(np.frombuffer(raster, dtype=np.uint8).reshape(h, w))


def encode_pgm(g: GrayRaster) -> bytes:
    """Encode as binary P5; inverse of decode_pgm for canonical output."""
    header = f"P5\n{g.width} {g.height}\n255\n".encode("ascii")
    return header + g.pixels.tobytes()


def _load_via_pillow(data: bytes) -> Raster:
    try:
        from PIL import Image, UnidentifiedImageError
    except ImportError as e:  # pragma: no cover - Pillow is a declared dep
        raise UnsupportedFormatError("PNG/JPEG support requires Pillow") from e
    try:
        with Image.open(io.BytesIO(data)) as im:
            rgb = im.convert("RGB")
            return Raster(np.asarray(rgb, dtype=np.uint8))
    except UnidentifiedImageError as e:
        raise UnsupportedFormatError("unrecognized image format") from e
    except OSError as e:
        raise CorruptImageError(str(e)) from e


def load_frame(data: bytes, format_hint: str | None = None) -> Raster:
    """Decode encoded image bytes into a Raster.

    Binary portable pixmaps (P5/P6) are decoded natively; PNG and JPEG go
    through the Pillow adapter. ``format_hint`` ("ppm", "pgm", "png",
    "jpeg") skips sniffing but does not change the result.
    """
    if not isinstance(data, (bytes, bytearray)):
        raise TypeError("load_frame expects bytes")
    data = bytes(data)
    if len(data) < 2:
        raise CorruptImageError("image data too short")
    hint = (format_hint or "").lower()
    if hint in ("ppm", "p6") or data[:2] == b"P6":
        return decode_ppm(data)
    if hint in ("pgm", "p5") or data[:2] == b"P5":
        g = decode_pgm(data)
        return Raster(np.repeat(g.pixels[:, :, None], 3, axis=2))
    if hint in ("png", "jpeg", "jpg") or data[:2] in (b"\x89P", b"\xff\xd8"):
        return _load_via_pillow(data)
    raise UnsupportedFormatError("unrecognized image format")


# ---------------------------------------------------------------------------
# Pixel operations
# ---------------------------------------------------------------------------

def rescale(r: Raster, width: int, height: int) -> Raster:
    """Nearest-neighbor rescale: output (x, y) reads input
    (floor(x*srcW/w), floor(y*srcH/h))."""
    if width < 1 or height < 1:
        raise InvalidDimensionsError("target dimensions must be positive")
    if width == r.width and height == r.height:
        return r
    xs = (np.arange(width, dtype=np.int64) * r.width) // width
    ys = (np.arange(height, dtype=np.int64) * r.height) // height
    return Raster(r.pixels[np.ix_(ys, xs)])


def to_grayscale(r: Raster) -> GrayRaster:
    """BT.601 luma: round(0.299 R + 0.587 G + 0.114 B), half rounds up."""
    p = r.pixels.astype(np.float64)
    luma = LUMA_WEIGHTS[0] * p[:, :, 0] + LUMA_WEIGHTS[1] * p[:, :, 1] + LUMA_WEIGHTS[2] * p[:, :, 2]
    return GrayRaster(np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8))


def gray_histogram(g: GrayRaster) -> Histogram256:
    """Per-intensity pixel counts; bin i counts pixels of intensity i."""
    return Histogram256(np.bincount(g.pixels.ravel(), minlength=256))
