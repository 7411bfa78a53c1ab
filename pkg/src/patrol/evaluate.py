"""Speed validation and exact per-site latency measurement.

Visits are computed exactly: on line instances a robot moving through a
site's coordinate counts as a visit, and an interval during which a
robot rests at a site counts as continuous coverage.  On matrix and
Euclidean metrics, edges are abstract segments, so visits happen only
at waypoints that coincide with a site (within a 1e-9 tolerance that
guards float drift; exact data never needs it).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    PeriodOverflowError,
    ScheduleFormatError,
    UnvisitedSiteError,
)
from .instance import Instance, Metric
from .rationals import format_fraction, lcm_fractions, to_fraction
from .schedule import CoordPos, Position, RobotTrack, Schedule, SitePos

VISIT_TOL = to_fraction("0.000000001")  # 1e-9, absolute, on coordinates/distances
SPEED_TOL = VISIT_TOL

DEFAULT_EVENT_CAP = 2_000_000


@dataclass(frozen=True)
class SpeedViolation:
    robot: int
    leg: int
    distance: Fraction
    duration: Fraction

    @property
    def excess(self) -> Fraction:
        return self.distance - self.duration

    def __str__(self) -> str:
        return (
            f"robot {self.robot} leg {self.leg}: distance {float(self.distance):g} "
            f"in time {float(self.duration):g} (excess {float(self.excess):g})"
        )


@dataclass(frozen=True)
class SiteLatency:
    site: int
    latency: Fraction
    weight: Fraction
    weighted: Fraction


@dataclass(frozen=True)
class LatencyReport:
    per_site: tuple[SiteLatency, ...]
    max_weighted: Fraction
    argmax_site: int

    def latency_of(self, site: int) -> Fraction:
        return self.per_site[site].latency

    def to_json_dict(self) -> dict:
        return {
            "max_weighted": format_fraction(self.max_weighted),
            "argmax_site": self.argmax_site,
            "per_site": [
                {
                    "site": s.site,
                    "latency": format_fraction(s.latency),
                    "weight": format_fraction(s.weight),
                    "weighted": format_fraction(s.weighted),
                }
                for s in self.per_site
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["site", "latency", "weight", "weighted"])
        for s in self.per_site:
            writer.writerow(
                [s.site, float(s.latency), float(s.weight), float(s.weighted)]
            )
        return buf.getvalue()


def _line_coord(pos: Position, metric: Metric) -> Fraction:
    if isinstance(pos, CoordPos):
        return pos.x
    if isinstance(pos, SitePos):
        return metric.coords[pos.site]
    a, b = metric.coords[pos.a], metric.coords[pos.b]
    return a + pos.frac * (b - a)


def position_distance(p: Position, q: Position, metric: Metric) -> Fraction:
    """Distance between two positions along a single metric edge.

    Positions not sharing an edge (after normalization) are a structural
    error: such a move would not follow a single edge of the metric.
    """
    if metric.variant == "line":
        return abs(_line_coord(p, metric) - _line_coord(q, metric))
    if isinstance(p, CoordPos) or isinstance(q, CoordPos):
        raise ScheduleFormatError("coordinate positions require a line metric")
    if isinstance(p, SitePos) and isinstance(q, SitePos):
        return metric.distance(p.site, q.site)
    if isinstance(p, SitePos):
        p, q = q, p
    # p is an EdgePos now
    d_edge = metric.distance(p.a, p.b)
    if isinstance(q, SitePos):
        if q.site == p.a:
            return p.frac * d_edge
        if q.site == p.b:
            return (1 - p.frac) * d_edge
        raise ScheduleFormatError(
            f"leg from inside edge ({p.a},{p.b}) to site {q.site} is not a single edge"
        )
    if (q.a, q.b) == (p.a, p.b):
        return abs(p.frac - q.frac) * d_edge
    raise ScheduleFormatError(
        f"leg between edges ({p.a},{p.b}) and ({q.a},{q.b}) is not a single edge"
    )


def validate_speed(schedule: Schedule, metric: Metric) -> list[SpeedViolation]:
    """Check every leg (and the wraparound leg) against unit speed."""
    schedule = schedule.expanded(metric)
    violations = []
    for r, track in enumerate(schedule.robots):
        for leg_idx, (t0, p0, t1, p1) in enumerate(track.legs()):
            d = position_distance(p0, p1, metric)
            if d > (t1 - t0) + SPEED_TOL:
                violations.append(SpeedViolation(r, leg_idx, d, t1 - t0))
    return violations


def combined_period(
    schedule: Schedule, metric: Metric | None = None, event_cap: int = DEFAULT_EVENT_CAP
) -> Fraction:
    """Least common period of all robot tracks.

    Raises PeriodOverflowError when unrolling every track to the common
    period would exceed event_cap waypoint events.
    """
    if metric is not None:
        schedule = schedule.expanded(metric)
    if any(not isinstance(t, RobotTrack) for t in schedule.robots):
        raise ScheduleFormatError("symbolic tracks need a metric to expand")
    periods = [t.period for t in schedule.robots]
    total = lcm_fractions(periods)
    events = 0
    for track in schedule.robots:
        events += int(total / track.period) * max(len(track.waypoints), 1)
        if events > event_cap:
            raise PeriodOverflowError(
                f"common period {total} needs more than {event_cap} events"
            )
    return total


def _track_visits(
    track: RobotTrack, instance: Instance
) -> dict[int, list[tuple[Fraction, Fraction]]]:
    """Visit intervals per site within one period of a single track.

    Instantaneous visits are zero-length intervals.  Times lie within
    [t_first, t_first + period).
    """
    metric = instance.metric
    visits: dict[int, list[tuple[Fraction, Fraction]]] = {s: [] for s in instance.sites}
    line = metric.variant == "line"
    for t0, p0, t1, p1 in track.legs():
        if line:
            x0, x1 = _line_coord(p0, metric), _line_coord(p1, metric)
            lo, hi = min(x0, x1), max(x0, x1)
            for s in instance.sites:
                c = metric.coords[s]
                if x0 == x1:
                    if abs(c - x0) <= VISIT_TOL:
                        visits[s].append((t0, t1))
                elif lo - VISIT_TOL <= c <= hi + VISIT_TOL:
                    cc = min(max(c, lo), hi)
                    tc = t0 + (t1 - t0) * abs(cc - x0) / (x1 - x0 if x1 > x0 else x0 - x1)
                    visits[s].append((tc, tc))
        else:
            stationary = p0 == p1
            for s in instance.sites:
                at0 = _coincides(p0, s, metric)
                if stationary and at0:
                    visits[s].append((t0, t1))
                elif at0:
                    visits[s].append((t0, t0))
    # The end of each leg is the start of the next, so endpoint visits are
    # recorded once per leg start; the final wrap leg ends at t_first+period,
    # which is the first leg's start in the next period.
    return visits


def _coincides(pos: Position, site: int, metric: Metric) -> bool:
    if isinstance(pos, SitePos):
        return metric.distance(pos.site, site) <= VISIT_TOL
    return False


def _merge(intervals: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    intervals.sort()
    merged: list[tuple[Fraction, Fraction]] = []
    for a, b in intervals:
        if merged and a <= merged[-1][1]:
            if b > merged[-1][1]:
                merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    return merged


def _max_gap(intervals: list[tuple[Fraction, Fraction]], period: Fraction) -> Fraction:
    merged = _merge(intervals)
    gap = Fraction(0)
    for (a0, b0), (a1, b1) in zip(merged, merged[1:]):
        gap = max(gap, a1 - b0)
    wrap = merged[0][0] + period - merged[-1][1]
    return max(gap, wrap, Fraction(0))


def max_weighted_latency(
    schedule: Schedule,
    instance: Instance,
    event_cap: int = DEFAULT_EVENT_CAP,
) -> LatencyReport:
    """Exact per-site latency, with wraparound.

    Each site is analyzed over the least common period of the robots
    that actually visit it, so a site served by one robot never needs a
    common-period unroll.  A jointly served site whose unroll would
    exceed event_cap raises PeriodOverflowError.
    """
    schedule = schedule.expanded(instance.metric)
    if not schedule.robots:
        raise UnvisitedSiteError(0, _name(instance, 0))
    per_track = [_track_visits(t, instance) for t in schedule.robots]

    latencies: list[Fraction] = []
    for s in instance.sites:
        holders = [r for r, vis in enumerate(per_track) if vis[s]]
        if not holders:
            raise UnvisitedSiteError(s, _name(instance, s))
        # a site served by one robot repeats with that robot's own period;
        # only jointly served sites need a common period unroll
        periods = [schedule.robots[r].period for r in holders]
        total = lcm_fractions(periods)
        events = sum(
            int(total / schedule.robots[r].period) * len(per_track[r][s])
            for r in holders
        )
        if events > event_cap:
            raise PeriodOverflowError(
                f"site {s} needs {events} visit events over the common period; "
                f"cap is {event_cap}"
            )
        intervals: list[tuple[Fraction, Fraction]] = []
        for r in holders:
            track = schedule.robots[r]
            reps = int(total / track.period)
            base = track.waypoints[0][0]
            for a, b in per_track[r][s]:
                start = (a - base) % track.period
                length = b - a
                for rep in range(reps):
                    intervals.append(
                        (start + rep * track.period, start + rep * track.period + length)
                    )
        latencies.append(_max_gap(_split_mod(intervals, total), total))

    rows = tuple(
        SiteLatency(s, lat, instance.weights[s], instance.weights[s] * lat)
        for s, lat in zip(instance.sites, latencies)
    )
    best = max(rows, key=lambda row: (row.weighted, -row.site))
    return LatencyReport(rows, best.weighted, best.site)


def _split_mod(
    intervals: list[tuple[Fraction, Fraction]], period: Fraction
) -> list[tuple[Fraction, Fraction]]:
    """Clip intervals into [0, period), splitting any that straddle the end."""
    out = []
    for a, b in intervals:
        if b > period:
            out.append((a, period))
            out.append((Fraction(0), b - period))
        else:
            out.append((a, b))
    return out


def _name(instance: Instance, site: int) -> Optional[str]:
    return instance.names[site] if instance.names else None
