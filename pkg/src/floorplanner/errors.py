"""Exception types shared across the package."""
from __future__ import annotations


class LayoutError(Exception):
    """Base class for all package errors."""


class MissingFile(LayoutError):
    """A file referenced by a manifest or the command line does not exist."""


class SchemaViolation(LayoutError):
    """A file parsed but its structure or field values are invalid."""


class InvariantViolation(LayoutError):
    """Loaded data breaks a model invariant (ids, tolerances, shapes)."""


class HeightOutOfRange(LayoutError):
    """Requested slice height falls outside the voxel grid's z extent."""


class UniverseNotCoverable(LayoutError):
    """A free cell of the cover universe is not covered by any candidate."""


class TooLarge(LayoutError):
    """Problem size exceeds an operation's stated limit."""


class DegeneratePolygon(LayoutError):
    """Polygon has fewer than 4 vertices, a zero-length edge, or is not CCW."""


class InvalidSpec(LayoutError):
    """A synthetic world description is inconsistent."""


class PoseOutsideFreeSpace(LayoutError):
    """A trajectory pose does not lie strictly inside any declared space."""


class StageError(LayoutError):
    """Wraps an error raised inside a named pipeline stage."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause
