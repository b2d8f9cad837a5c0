"""Input validation helpers shared by the estimator adapters."""

from __future__ import annotations

import numpy as np

from .imaging import GrayRaster, Raster, load_frame, to_grayscale


def as_raster(x) -> Raster:
    """Coerce an input sample to a Raster.

    Accepts Raster instances, encoded image bytes, (h, w, 3) arrays, or
    (h, w) grayscale arrays (replicated across channels).
    """
    if isinstance(x, Raster):
        return x
    if isinstance(x, (bytes, bytearray)):
        return load_frame(bytes(x))
    a = np.asarray(x)
    if a.ndim == 2:
        a = np.repeat(a[:, :, None], 3, axis=2)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ValueError("expected (h, w, 3) or (h, w) pixel data")
    return Raster(a)


def as_gray(x) -> GrayRaster:
    """Coerce an input sample to a GrayRaster (converting color inputs)."""
    if isinstance(x, GrayRaster):
        return x
    return to_grayscale(as_raster(x))


def check_raster_sequence(X) -> list[Raster]:
    """Validate a non-empty sequence of image samples."""
    items = [as_raster(x) for x in X]
    if not items:
        raise ValueError("expected at least one image")
    return items
