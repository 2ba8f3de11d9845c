"""Exchangeable criticality measures evaluated on scene-graph edges.

Three measure families are implemented:

* constant-velocity Time-To-Collision, its continuous inverse, and the
  intersection variant evaluated at a shared conflict point,
* the longitudinal safe-distance check of the Responsibility-Sensitive
  Safety model (binary safe/unsafe),
* the Safety Force Field safety potential: both actors run a hard-stop
  safety procedure along the lane and the potential grades how much of
  their stopping time overlaps a predicted collision.

All functions are pure; per-class parameters come from config, not code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import ZeroGap
from .ingest import ObjectClass, object_class_from_name
from .scenegraph import GraphNode, RelationEdge, RelationKind, SceneGraph


@dataclass(frozen=True)
class RssParams:
    """Per-class constants of the RSS longitudinal safe-distance rule."""

    response_time: float = 1.0  # seconds
    a_max_accel: float = 2.0  # m/s^2
    a_min_brake: float = 4.0  # m/s^2
    a_max_brake: float = 8.0  # m/s^2

    def __post_init__(self) -> None:
        if self.response_time < 0:
            raise ValueError("response_time must be >= 0")
        if min(self.a_max_accel, self.a_min_brake, self.a_max_brake) <= 0:
            raise ValueError("accelerations must be > 0")


@dataclass(frozen=True)
class SffParams:
    a_brake: float = 5.0  # hard-stop deceleration, m/s^2
    p: float = 2.0  # norm order

    def __post_init__(self) -> None:
        if self.a_brake <= 0:
            raise ValueError("a_brake must be > 0")
        if self.p < 1:
            raise ValueError("norm order p must be >= 1")


def _default_rss_table() -> dict[ObjectClass, RssParams]:
    return {cls: RssParams() for cls in ObjectClass}


@dataclass(frozen=True)
class MeasureParams:
    """Bundle of all measure parameters, loaded from a config document."""

    rss: Mapping[ObjectClass, RssParams] = field(default_factory=_default_rss_table)
    sff: SffParams = field(default_factory=SffParams)
    tau_sim: float = 2.0  # TTC_int simultaneity window, seconds

    def __post_init__(self) -> None:
        if self.tau_sim < 0:
            raise ValueError("tau_sim must be >= 0")

    def rss_for(self, cls: ObjectClass) -> RssParams:
        return self.rss.get(cls) or self.rss.get(ObjectClass.CAR) or RssParams()

    @classmethod
    def from_json(cls, doc: Mapping) -> "MeasureParams":
        table = _default_rss_table()
        for name, entry in doc.get("rss", {}).items():
            table[object_class_from_name(name)] = RssParams(
                response_time=entry.get("response_time", 1.0),
                a_max_accel=entry.get("a_max_accel", 2.0),
                a_min_brake=entry.get("a_min_brake", 4.0),
                a_max_brake=entry.get("a_max_brake", 8.0),
            )
        sff_doc = doc.get("sff", {})
        return cls(
            rss=table,
            sff=SffParams(
                a_brake=sff_doc.get("a_brake", 5.0), p=sff_doc.get("p", 2.0)
            ),
            tau_sim=doc.get("ttc_int", {}).get("tau_sim", 2.0),
        )

    def to_json(self) -> dict:
        return {
            "version": 1,
            "rss": {
                cls.value: {
                    "response_time": p.response_time,
                    "a_max_accel": p.a_max_accel,
                    "a_min_brake": p.a_min_brake,
                    "a_max_brake": p.a_max_brake,
                }
                for cls, p in sorted(self.rss.items(), key=lambda kv: kv[0].value)
            },
            "sff": {"a_brake": self.sff.a_brake, "p": self.sff.p},
            "ttc_int": {"tau_sim": self.tau_sim},
        }


@dataclass(frozen=True)
class CriticalityRecord:
    """One (timestamp, actor pair) evaluation result.

    Measures that do not apply to the edge kind stay None; ``detail`` keeps
    the measure internals (raw TTC, RSS safe distance, hard-stop times).
    """

    timestamp: int
    pair: tuple[int, int]
    inv_ttc: float | None = None
    rss_unsafe: bool | None = None
    sff_potential: float | None = None
    detail: Mapping = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "t": self.timestamp,
            "pair": list(self.pair),
            "inv_ttc": self.inv_ttc,
            "rss_unsafe": self.rss_unsafe,
            "sff": self.sff_potential,
            "detail": dict(self.detail),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "CriticalityRecord":
        return cls(
            timestamp=doc["t"],
            pair=(doc["pair"][0], doc["pair"][1]),
            inv_ttc=doc.get("inv_ttc"),
            rss_unsafe=doc.get("rss_unsafe"),
            sff_potential=doc.get("sff"),
            detail=doc.get("detail", {}),
        )


# --- Time-To-Collision family ---------------------------------------------

def compute_ttc(gap: float, v_lead: float, v_follow: float) -> float | None:
    """Constant-velocity TTC over a lane gap; None when the pair is not closing.

    The plain TTC is discontinuous at matched speeds, which is why the
    pipeline ranks with its inverse; the raw value is still recorded.
    """
    if gap < 0:
        raise ValueError("gap must be >= 0")
    closing = v_follow - v_lead
    if closing <= 0.0:
        return None
    return gap / closing


def compute_inverse_ttc(gap: float, v_lead: float, v_follow: float) -> float:
    """Inverse TTC: a continuous risk indicator, higher means riskier.

    Returns 0 for non-closing pairs (including matched speeds), making the
    function continuous where plain TTC diverges. A zero gap with positive
    closing speed means contact and raises :class:`ZeroGap`.
    """
    closing = max(0.0, v_follow - v_lead)
    if gap <= 0.0:
        if closing > 0.0:
            raise ZeroGap(f"contact: gap=0 with closing speed {closing:.3f} m/s")
        return 0.0
    return closing / gap


def compute_ttc_int(
    d_a: float, v_a: float, d_b: float, v_b: float, tau_sim: float
) -> float | None:
    """TTC at a shared conflict point, defined by the second arriver.

    ``d_a``/``d_b`` are the remaining arc distances of the two actors to the
    conflict point. Under constant velocity the arrival times are d/v; the
    measure only applies when both arrive within the simultaneity window
    ``tau_sim``, and equals the arrival time of whichever vehicle gets
    there second. A standing actor never arrives.
    """
    if v_a <= 0.0 or v_b <= 0.0:
        return None
    t_a = d_a / v_a
    t_b = d_b / v_b
    if abs(t_a - t_b) > tau_sim:
        return None
    return max(t_a, t_b)


# --- RSS longitudinal safe distance -----------------------------------------

def compute_rss_longitudinal(
    gap: float, v_follow: float, v_lead: float, params: RssParams
) -> tuple[bool, float]:
    """Binary RSS check of the longitudinal minimum safe distance.

    The follower is assumed to accelerate at ``a_max_accel`` for the
    response time, then brake at ``a_min_brake``, while the lead vehicle
    brakes at ``a_max_brake``. Returns ``(unsafe, d_min)`` with
    ``unsafe`` true when the current gap undercuts the safe distance.
    """
    tau = params.response_time
    v_react = v_follow + tau * params.a_max_accel
    d_min = (
        v_follow * tau
        + 0.5 * params.a_max_accel * tau**2
        + v_react**2 / (2.0 * params.a_min_brake)
        - v_lead**2 / (2.0 * params.a_max_brake)
    )
    d_min = max(0.0, d_min)
    return gap < d_min, d_min


# --- SFF safety potential ----------------------------------------------------

def _stop_position(s0: float, v: float, a: float, t: float) -> float:
    """Position on the lane axis at time t under a hard stop from (s0, v)."""
    t_stop = v / a
    if t >= t_stop:
        return s0 + v * v / (2.0 * a)
    return s0 + v * t - 0.5 * a * t * t


def _earliest_root(a2: float, a1: float, a0: float, lo: float, hi: float) -> float | None:
    """Smallest t in [lo, hi] with a2*t^2 + a1*t + a0 == 0."""
    eps = 1e-12
    if abs(a2) < eps:
        if abs(a1) < eps:
            return None
        t = -a0 / a1
        return t if lo - 1e-9 <= t <= hi + 1e-9 else None
    disc = a1 * a1 - 4.0 * a2 * a0
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    roots = sorted(((-a1 - sq) / (2.0 * a2), (-a1 + sq) / (2.0 * a2)))
    for t in roots:
        if lo - 1e-9 <= t <= hi + 1e-9:
            return min(max(t, lo), hi)
    return None


def _earliest_contact(
    front_bumper0: float, v_rear: float, rear_bumper0: float, v_front: float, a: float
) -> float | None:
    """First time the rear actor's front bumper reaches the front actor's rear.

    Both actors decelerate at ``a`` until standstill, then hold. The bumper
    difference h(t) is piecewise quadratic with breaks at the two stop
    times; each phase is solved in closed form.
    """
    h0 = front_bumper0 - rear_bumper0
    if h0 >= 0.0:
        return 0.0
    t_rear = v_rear / a
    t_front = v_front / a
    t1, t2 = sorted((t_rear, t_front))

    # phase 1: both in motion, equal deceleration cancels -> linear in t
    if t1 > 0.0:
        t = _earliest_root(0.0, v_rear - v_front, h0, 0.0, t1)
        if t is not None:
            return t
    # phase 2: exactly one still in motion
    if t2 > t1:
        if t_rear > t_front:
            # rear still braking, front holds at its stop position
            front_hold = rear_bumper0 + v_front**2 / (2.0 * a)
            t = _earliest_root(
                -0.5 * a, v_rear, front_bumper0 - front_hold, t1, t2
            )
        else:
            # rear already stopped, front still braking (opening case)
            rear_hold = front_bumper0 + v_rear**2 / (2.0 * a)
            t = _earliest_root(0.5 * a, -v_front, rear_hold - rear_bumper0, t1, t2)
        if t is not None:
            return t
    # phase 3: both stopped; h is constant and a late contact would have
    # crossed zero inside an earlier phase already
    return None


def compute_sff_safety_potential(
    a_state: tuple[float, float],
    b_state: tuple[float, float],
    half_lengths: tuple[float, float],
    params: MeasureParams,
) -> tuple[float, dict]:
    """Safety potential of two actors sharing one longitudinal axis.

    Each state is ``(s, v)`` on the lane axis; both actors trace a
    hard-stop profile at ``params.sff.a_brake``. The potential is 0 when
    the stop trajectories never overlap in space-time; otherwise it is the
    p-norm of the per-actor remaining stopping times past the first
    contact instant ``c_t`` (components clamped at zero).
    """
    a_brake = params.sff.a_brake
    (s_a, v_a), (s_b, v_b) = a_state, b_state
    t_a_stop = v_a / a_brake
    t_b_stop = v_b / a_brake

    if s_a <= s_b:
        rear_s, rear_v, rear_half = s_a, v_a, half_lengths[0]
        front_s, front_v, front_half = s_b, v_b, half_lengths[1]
    else:
        rear_s, rear_v, rear_half = s_b, v_b, half_lengths[1]
        front_s, front_v, front_half = s_a, v_a, half_lengths[0]

    c_t = _earliest_contact(
        rear_s + rear_half, rear_v, front_s - front_half, front_v, a_brake
    )
    detail = {"c_t": c_t, "t_a_stop": t_a_stop, "t_b_stop": t_b_stop}
    if c_t is None:
        return 0.0, detail
    comp_a = max(0.0, t_a_stop - c_t)
    comp_b = max(0.0, t_b_stop - c_t)
    p = params.sff.p
    rho = (comp_a**p + comp_b**p) ** (1.0 / p)
    return rho, detail


# --- edge evaluation ----------------------------------------------------------

def evaluate_edge(
    edge: RelationEdge,
    nodes: Mapping[int, GraphNode],
    params: MeasureParams,
    timestamp: int,
) -> CriticalityRecord | None:
    """Evaluate every measure applicable to one relation edge.

    Longitudinal edges yield inverse TTC, the RSS state and the SFF
    potential; intersecting edges yield the inverse of TTC at the conflict
    point (0 when the simultaneity condition fails). Lateral relations
    carry no measure and are suppressed.
    """
    if edge.kind is RelationKind.LATERAL:
        return None

    src = nodes[edge.from_id]
    dst = nodes[edge.to_id]

    if edge.kind is RelationKind.LONGITUDINAL:
        gap = edge.gap if edge.gap is not None else 0.0
        v_follow = src.state.speed
        v_lead = dst.state.speed
        detail: dict = {"kind": edge.kind.value, "gap": gap}

        try:
            inv_ttc = compute_inverse_ttc(gap, v_lead, v_follow)
        except ZeroGap:
            inv_ttc = None
            detail["contact"] = True
        detail["ttc"] = compute_ttc(gap, v_lead, v_follow)

        rss = params.rss_for(src.obj.object_class)
        unsafe, d_min = compute_rss_longitudinal(gap, v_follow, v_lead, rss)
        detail["d_min"] = d_min

        half_f = src.obj.half_length
        half_l = dst.obj.half_length
        rho, sff_detail = compute_sff_safety_potential(
            (0.0, v_follow),
            (gap + half_f + half_l, v_lead),
            (half_f, half_l),
            params,
        )
        detail.update(sff_detail)
        return CriticalityRecord(
            timestamp=timestamp,
            pair=(edge.from_id, edge.to_id),
            inv_ttc=inv_ttc,
            rss_unsafe=unsafe,
            sff_potential=rho,
            detail=detail,
        )

    # intersecting: time to the shared conflict point
    conflict = edge.conflict
    assert conflict is not None and src.pose is not None and dst.pose is not None
    d_src = edge.gap if edge.gap is not None else 0.0
    d_dst = conflict.distance_on(dst.pose.lane_id) - dst.pose.s
    ttc_int = compute_ttc_int(
        d_src, src.state.speed, d_dst, dst.state.speed, params.tau_sim
    )
    inv = 1.0 / ttc_int if ttc_int is not None and ttc_int > 0.0 else 0.0
    return CriticalityRecord(
        timestamp=timestamp,
        pair=(edge.from_id, edge.to_id),
        inv_ttc=inv,
        detail={
            "kind": edge.kind.value,
            "ttc_int": ttc_int,
            "d_from": d_src,
            "d_to": d_dst,
        },
    )


def evaluate_graph(graph: SceneGraph, params: MeasureParams) -> list[CriticalityRecord]:
    """All criticality records for one scene graph, deterministically ordered.

    Intersecting relations exist as mirrored edge pairs but describe one
    interaction, so they are evaluated once per unordered pair (from the
    edge whose source has the lower track id).
    """
    records: list[CriticalityRecord] = []
    for edge in graph.edges:
        if edge.kind is RelationKind.INTERSECTING and edge.from_id > edge.to_id:
            continue
        record = evaluate_edge(edge, graph.nodes, params, graph.timestamp)
        if record is not None:
            records.append(record)
    records.sort(key=lambda r: (r.pair, r.detail.get("kind", "")))
    return records


def load_params(path) -> MeasureParams:
    import json

    with open(path, "r", encoding="utf-8") as fh:
        return MeasureParams.from_json(json.load(fh))
