"""Exception types raised across the package."""


class FrameFinderError(Exception):
    """Base class for all errors raised by this package."""


class UnsupportedFormatError(FrameFinderError):
    """Image bytes are in a format no decoder handles."""


class CorruptImageError(FrameFinderError):
    """Image bytes are truncated or otherwise undecodable."""


class InvalidDimensionsError(FrameFinderError):
    """A requested width or height is not positive."""


class EmptySequenceError(FrameFinderError):
    """A frame sequence is empty."""


class ImageTooNarrowError(FrameFinderError):
    """Image width does not exceed the co-occurrence step."""


class ImageTooSmallError(FrameFinderError):
    """Image is smaller than a filter or window requires."""


class DegenerateTextureError(FrameFinderError):
    """Co-occurrence correlation is undefined (zero variance)."""


class EmptyHistogramError(FrameFinderError):
    """Histogram has zero total mass."""


class DuplicateFrameError(FrameFinderError):
    """Frame id is already present in the index."""


class DimensionMismatchError(FrameFinderError):
    """Two feature values cannot be compared (different kind or size)."""


class NoCandidatesError(FrameFinderError):
    """Ranking was asked to order an empty candidate set."""


class MalformedFeatureStringError(FrameFinderError):
    """A serialized feature line does not match its grammar."""


class UnknownIdError(FrameFinderError):
    """No record exists for the given id."""


class EmptyVideoError(FrameFinderError):
    """A video was submitted with no decodable frames."""


class NameRequiredError(FrameFinderError):
    """A video name was empty."""


class EmptyCatalogError(FrameFinderError):
    """Search was attempted against an empty catalog."""


class NoQueriesError(FrameFinderError):
    """Evaluation was attempted with no labeled queries."""
