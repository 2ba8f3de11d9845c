"""Exception types shared across the pipeline."""

from __future__ import annotations


class ScenecritError(Exception):
    """Base class for all errors raised by this package."""


# --- trajectory ingestion -------------------------------------------------

class IngestError(ScenecritError):
    """Base class for object-list parsing errors."""


class MissingColumn(IngestError):
    """The column mapping names a column that is absent from the header."""

    def __init__(self, column: str) -> None:
        super().__init__(f"mapped column {column!r} not found in CSV header")
        self.column = column


class BadNumeric(IngestError):
    """A numeric field failed to parse; reports row and column."""

    def __init__(self, row: int, column: str, value: str) -> None:
        super().__init__(f"row {row}, column {column!r}: cannot parse {value!r}")
        self.row = row
        self.column = column
        self.value = value


class UnknownClass(IngestError):
    """An object class label is not one of the supported classes."""

    def __init__(self, row: int, value: str) -> None:
        super().__init__(f"row {row}: unknown object class {value!r}")
        self.row = row
        self.value = value


class NonMonotonicTime(IngestError):
    """A track carries duplicate (or otherwise non-increasing) timestamps."""

    def __init__(self, track_id: int, timestamp: int) -> None:
        super().__init__(
            f"track {track_id}: duplicate timestamp {timestamp} ms"
        )
        self.track_id = track_id
        self.timestamp = timestamp


class UnknownTimestamp(ScenecritError):
    """A queried timestamp is not part of the scenario's timeline."""

    def __init__(self, timestamp: int) -> None:
        super().__init__(f"timestamp {timestamp} ms not in scenario")
        self.timestamp = timestamp


# --- lane map --------------------------------------------------------------

class LaneMapError(ScenecritError):
    """Base class for lane-map loading and query errors."""


class SchemaViolation(LaneMapError):
    """The lane-map document does not match the canonical schema."""


class AsymmetricNeighbor(LaneMapError):
    """A left/right neighbor link is not reciprocated by the other lane."""

    def __init__(self, lane_id: int, neighbor_id: int) -> None:
        super().__init__(
            f"lane {lane_id} names neighbor {neighbor_id}, "
            f"but {neighbor_id} does not link back"
        )
        self.lane_id = lane_id
        self.neighbor_id = neighbor_id


class DegenerateCenterline(LaneMapError):
    """A centerline has fewer than two points or a zero-length segment."""

    def __init__(self, lane_id: int, detail: str) -> None:
        super().__init__(f"lane {lane_id}: {detail}")
        self.lane_id = lane_id


class NoLaneMatch(LaneMapError):
    """No lane lies within the matching cutoff and heading gate."""

    def __init__(self, x: float, y: float) -> None:
        super().__init__(f"no lane matches pose at ({x:.2f}, {y:.2f})")
        self.x = x
        self.y = y


# --- criticality measures --------------------------------------------------

class ZeroGap(ScenecritError):
    """Inverse TTC is undefined at zero gap with positive closing speed."""


# --- visualization export --------------------------------------------------

class MismatchedTimestamp(ScenecritError):
    """Records handed to an exporter belong to a different timestamp."""

    def __init__(self, expected: int, got: int) -> None:
        super().__init__(
            f"records are for t={got} ms but the graph is at t={expected} ms"
        )
        self.expected = expected
        self.got = got


class EmptyWindow(ScenecritError):
    """A requested time window contains no scenario timestamps."""

    def __init__(self, t0: int, t1: int) -> None:
        super().__init__(f"window [{t0}, {t1}] ms selects no frames")
        self.t0 = t0
        self.t1 = t1
