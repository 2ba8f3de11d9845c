"""Scenario sweep: per-frame evaluation, timelines, critical intervals.

One pass over a scenario builds the scene graph of every frame, evaluates
all measures on its edges and reduces the records to one timeline per
measure (the per-timestamp maximum over all pairs; the binary RSS state
becomes 0/1 so interval detection is uniform across measures). Interval
extraction then finds the maximal above-threshold runs.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .criticality import CriticalityRecord, MeasureParams, evaluate_graph
from .ingest import Scenario, scene_at
from .jsonio import canonical_dumps
from .lanemap import LaneMap
from .scenegraph import GraphConfig, build_scene_graph


class Measure(str, Enum):
    INV_TTC = "inv_ttc"
    RSS = "rss"
    SFF = "sff"


ALL_MEASURES: tuple[Measure, ...] = (Measure.INV_TTC, Measure.RSS, Measure.SFF)


def record_value(record: CriticalityRecord, measure: Measure) -> float | None:
    """The scalar a record contributes to one measure's timeline."""
    if measure is Measure.INV_TTC:
        return record.inv_ttc
    if measure is Measure.RSS:
        if record.rss_unsafe is None:
            return None
        return 1.0 if record.rss_unsafe else 0.0
    return record.sff_potential


@dataclass(frozen=True)
class Timeline:
    measure: Measure
    points: tuple[tuple[int, float], ...]  # (timestamp ms, value), one per frame

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.points)

    def peak(self) -> tuple[int, float]:
        """(timestamp, value) of the maximum; first frame wins ties."""
        best_t, best_v = self.points[0]
        for t, v in self.points[1:]:
            if v > best_v:
                best_t, best_v = t, v
        return best_t, best_v

    def to_json(self) -> dict:
        return {
            "measure": self.measure.value,
            "points": [[t, v] for t, v in self.points],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "Timeline":
        return cls(
            measure=Measure(doc["measure"]),
            points=tuple((int(t), float(v)) for t, v in doc["points"]),
        )


@dataclass(frozen=True)
class CriticalInterval:
    measure: Measure
    t_start: int
    t_end: int
    peak_value: float
    peak_timestamp: int
    peak_pair: tuple[int, int] | None

    def to_json(self) -> dict:
        return {
            "measure": self.measure.value,
            "t_start": self.t_start,
            "t_end": self.t_end,
            "peak_value": self.peak_value,
            "peak_t": self.peak_timestamp,
            "peak_pair": list(self.peak_pair) if self.peak_pair else None,
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "CriticalInterval":
        pair = doc.get("peak_pair")
        return cls(
            measure=Measure(doc["measure"]),
            t_start=doc["t_start"],
            t_end=doc["t_end"],
            peak_value=doc["peak_value"],
            peak_timestamp=doc["peak_t"],
            peak_pair=(pair[0], pair[1]) if pair else None,
        )


def analyze_scenario(
    scenario: Scenario,
    lane_map: LaneMap,
    params: MeasureParams | None = None,
    measures: Sequence[Measure] = ALL_MEASURES,
    config: GraphConfig | None = None,
    workers: int | None = None,
) -> tuple[list[CriticalityRecord], dict[Measure, Timeline]]:
    """Evaluate every frame and reduce to per-measure timelines.

    Frames are independent, so ``workers > 1`` fans them out to a thread
    pool; results are collected in timestamp order either way and the
    output is identical to a sequential run.
    """
    params = params or MeasureParams()
    config = config or GraphConfig()

    def frame(t: int) -> list[CriticalityRecord]:
        graph = build_scene_graph(scene_at(scenario, t), lane_map, config, timestamp=t)
        return evaluate_graph(graph, params)

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_frame = list(pool.map(frame, scenario.timestamps))
    else:
        per_frame = [frame(t) for t in scenario.timestamps]

    records = [r for frame_records in per_frame for r in frame_records]

    timelines: dict[Measure, Timeline] = {}
    for measure in measures:
        points: list[tuple[int, float]] = []
        for t, frame_records in zip(scenario.timestamps, per_frame):
            vals = [
                v
                for v in (record_value(r, measure) for r in frame_records)
                if v is not None
            ]
            points.append((t, max(vals) if vals else 0.0))
        timelines[measure] = Timeline(measure=measure, points=tuple(points))
    return records, timelines


def _peak_pair(
    records_at_peak: Sequence[CriticalityRecord], measure: Measure
) -> tuple[int, int] | None:
    scored = [
        (v, r.pair)
        for r in records_at_peak
        if (v := record_value(r, measure)) is not None
    ]
    if not scored:
        return None
    scored.sort(key=lambda item: (-item[0], item[1]))
    return scored[0][1]


def detect_critical_intervals(
    timeline: Timeline,
    threshold: float,
    min_gap: int = 5,
    records: Iterable[CriticalityRecord] = (),
) -> list[CriticalInterval]:
    """Maximal runs of strictly above-threshold timeline points.

    Runs separated by fewer than ``min_gap`` below-threshold frames are
    merged into one interval; this debounces flicker but means a merged
    interval can contain sub-threshold frames. Peak metadata comes from
    the records of the peak frame.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    if min_gap < 1:
        raise ValueError("min_gap must be >= 1")

    pts = timeline.points
    runs: list[list[int]] = []  # [first_index, last_index]
    for i, (_, v) in enumerate(pts):
        if v <= threshold:
            continue
        if runs and i == runs[-1][1] + 1:
            runs[-1][1] = i
        else:
            runs.append([i, i])

    merged: list[list[int]] = []
    for run in runs:
        if merged and run[0] - merged[-1][1] - 1 < min_gap:
            merged[-1][1] = run[1]
        else:
            merged.append(run)

    by_t: dict[int, list[CriticalityRecord]] = defaultdict(list)
    for r in records:
        by_t[r.timestamp].append(r)

    intervals: list[CriticalInterval] = []
    for i0, i1 in merged:
        peak_i = max(range(i0, i1 + 1), key=lambda i: (pts[i][1], -i))
        peak_t, peak_v = pts[peak_i]
        intervals.append(
            CriticalInterval(
                measure=timeline.measure,
                t_start=pts[i0][0],
                t_end=pts[i1][0],
                peak_value=peak_v,
                peak_timestamp=peak_t,
                peak_pair=_peak_pair(by_t.get(peak_t, ()), timeline.measure),
            )
        )
    return intervals


def pair_breakdown(
    records: Iterable[CriticalityRecord], interval: CriticalInterval
) -> list[dict]:
    """Per-pair, per-measure series inside one interval's time range.

    A pair holding several relations at one timestamp contributes the max
    of its record values. Output is sorted by pair for stable artifacts.
    """
    series: dict[tuple[int, int], dict[Measure, dict[int, float]]] = defaultdict(
        lambda: defaultdict(dict)
    )
    for r in records:
        if not interval.t_start <= r.timestamp <= interval.t_end:
            continue
        pair = tuple(sorted(r.pair))
        for measure in ALL_MEASURES:
            v = record_value(r, measure)
            if v is None:
                continue
            existing = series[pair][measure].get(r.timestamp)
            if existing is None or v > existing:
                series[pair][measure][r.timestamp] = v

    out = []
    for pair in sorted(series):
        entry: dict = {"pair": list(pair), "series": {}}
        for measure in ALL_MEASURES:
            pts = series[pair].get(measure)
            if pts:
                entry["series"][measure.value] = [[t, pts[t]] for t in sorted(pts)]
        out.append(entry)
    return out


# --- persistence -----------------------------------------------------------

def write_records_jsonl(records: Iterable[CriticalityRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(canonical_dumps(r.to_json()) + "\n")


def read_records_jsonl(path) -> list[CriticalityRecord]:
    import json

    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(CriticalityRecord.from_json(json.loads(line)))
    return out


def timelines_to_json(timelines: Mapping[Measure, Timeline]) -> dict:
    return {
        "version": 1,
        "timelines": [timelines[m].to_json() for m in ALL_MEASURES if m in timelines],
    }


def timelines_from_json(doc: Mapping) -> dict[Measure, Timeline]:
    out = {}
    for entry in doc["timelines"]:
        tl = Timeline.from_json(entry)
        out[tl.measure] = tl
    return out


def timelines_to_csv(timelines: Mapping[Measure, Timeline]) -> str:
    """Flat table (one row per timestamp) for external plotting tools."""
    import csv
    import io

    present = [m for m in ALL_MEASURES if m in timelines]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t"] + [m.value for m in present])
    if present:
        n = len(timelines[present[0]].points)
        for i in range(n):
            t = timelines[present[0]].points[i][0]
            writer.writerow(
                [t] + [f"{timelines[m].points[i][1]:.6g}" for m in present]
            )
    return buf.getvalue()


def intervals_to_json(
    intervals: Sequence[CriticalInterval], threshold: float, min_gap: int
) -> dict:
    return {
        "version": 1,
        "threshold": threshold,
        "min_gap": min_gap,
        "intervals": [iv.to_json() for iv in intervals],
    }
