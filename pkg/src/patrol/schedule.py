"""Periodic schedule representation and serialization.

A schedule is a list of robot tracks.  The common track form is a
period plus timed waypoints; between consecutive waypoints the robot
moves at constant speed along a single edge of the metric (or along the
line), or waits in place.  A track may instead be stored symbolically
as a round-robin walk over path pieces, which the evaluator expands.

Times and coordinates are exact rationals and serialize as decimal
strings where possible ("2.5") and as "p/q" otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence, Union

from .errors import ResourceLimitError, ScheduleFormatError
from .instance import Metric
from .rationals import format_fraction, to_fraction


@dataclass(frozen=True)
class SitePos:
    site: int


@dataclass(frozen=True)
class CoordPos:
    """A 1D coordinate (line instances only)."""

    x: Fraction


@dataclass(frozen=True)
class EdgePos:
    """A point along the metric edge (a, b), at `frac` of the way from a."""

    a: int
    b: int
    frac: Fraction


Position = Union[SitePos, CoordPos, EdgePos]


def normalize_position(pos: Position) -> Position:
    if isinstance(pos, EdgePos):
        if pos.frac == 0:
            return SitePos(pos.a)
        if pos.frac == 1:
            return SitePos(pos.b)
        if pos.a > pos.b:
            return EdgePos(pos.b, pos.a, 1 - pos.frac)
        if not 0 < pos.frac < 1:
            raise ScheduleFormatError(f"edge fraction out of range: {pos.frac}")
    return pos


@dataclass(frozen=True)
class RobotTrack:
    """One robot's periodic motion: timed waypoints wrapped at `period`."""

    period: Fraction
    waypoints: tuple[tuple[Fraction, Position], ...]

    def __post_init__(self):
        if self.period <= 0:
            raise ScheduleFormatError("track period must be positive")
        if not self.waypoints:
            raise ScheduleFormatError("track needs at least one waypoint")
        times = [t for t, _ in self.waypoints]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ScheduleFormatError("waypoint times must be strictly increasing")
        if times[0] < 0:
            raise ScheduleFormatError("waypoint times must be nonnegative")
        if times[-1] - times[0] > self.period:
            raise ScheduleFormatError("waypoints span more than one period")

    def legs(self) -> list[tuple[Fraction, Position, Fraction, Position]]:
        """Consecutive (t0, p0, t1, p1) legs including the wraparound leg."""
        out = []
        for (t0, p0), (t1, p1) in zip(self.waypoints, self.waypoints[1:]):
            out.append((t0, p0, t1, p1))
        t_first, p_first = self.waypoints[0]
        t_last, p_last = self.waypoints[-1]
        if t_last - t_first < self.period:
            out.append((t_last, p_last, t_first + self.period, p_first))
        elif p_last != p_first:
            raise ScheduleFormatError("full-period track must wrap to its start")
        return out


@dataclass(frozen=True)
class RoundRobinTrack:
    """Symbolic track: cycle over trees, one path piece per tree per turn.

    trees[i] is the ordered tuple of path pieces for tree i (each piece a
    tuple of site ids).  The robot traverses the current piece of tree i,
    then moves to the start of tree (i+1)'s current piece; a tree's piece
    index advances each time that tree is visited.  Used when the fully
    expanded period would be unreasonably long to materialize eagerly.
    """

    trees: tuple[tuple[tuple[int, ...], ...], ...]

    def rounds_to_repeat(self) -> int:
        counts = [len(paths) for paths in self.trees]
        return len(self.trees) * lcm(*counts)

    def expand(self, metric: Metric, max_rounds: int = 2_000_000) -> RobotTrack:
        rounds = self.rounds_to_repeat()
        if rounds > max_rounds:
            raise ResourceLimitError(
                f"round-robin track needs {rounds} rounds to close; cap is {max_rounds}"
            )
        return expand_round_robin(self.trees, metric)


Track = Union[RobotTrack, RoundRobinTrack]


@dataclass(frozen=True)
class Schedule:
    robots: tuple[Track, ...]

    def expanded(self, metric: Metric, max_rounds: int = 2_000_000) -> "Schedule":
        return Schedule(
            tuple(
                r.expand(metric, max_rounds) if isinstance(r, RoundRobinTrack) else r
                for r in self.robots
            )
        )


def expand_round_robin(
    trees: Sequence[Sequence[Sequence[int]]], metric: Metric
) -> RobotTrack:
    """Materialize one full period of the round-robin walk."""
    h = len(trees)
    counts = [len(paths) for paths in trees]
    rounds = h * lcm(*counts)
    idx = [0] * h
    t = Fraction(0)
    start = trees[0][0][0]
    pos = start
    waypoints: list[tuple[Fraction, Position]] = [(t, SitePos(start))]

    def advance(target: int):
        nonlocal t, pos
        step = metric.distance(pos, target)
        if step > 0:
            t += step
            waypoints.append((t, SitePos(target)))
        pos = target

    for r in range(rounds):
        i = r % h
        piece = trees[i][idx[i]]
        advance(piece[0])
        for v in piece[1:]:
            advance(v)
        idx[i] += 1
        if idx[i] == counts[i]:
            idx[i] = 0
    advance(start)  # close the period back at the starting vertex
    period = t
    if period == 0:
        return RobotTrack(Fraction(1), (waypoints[0],))
    return RobotTrack(period, tuple(waypoints[:-1]) if waypoints[-1][0] == period else tuple(waypoints))


def stationary_track(pos: Position, period: Fraction = Fraction(1)) -> RobotTrack:
    return RobotTrack(period, ((Fraction(0), normalize_position(pos)),))


def zigzag_track(left: Fraction, right: Fraction) -> RobotTrack:
    """Sweep [left, right] back and forth at unit speed (line instances)."""
    if right < left:
        left, right = right, left
    span = right - left
    if span == 0:
        return stationary_track(CoordPos(left))
    return RobotTrack(
        2 * span,
        ((Fraction(0), CoordPos(left)), (span, CoordPos(right))),
    )


def loop_track(sites: Sequence[int], metric: Metric) -> RobotTrack:
    """Repeatedly traverse the closed tour site[0] -> ... -> site[-1] -> site[0]."""
    order = list(sites)
    t = Fraction(0)
    waypoints: list[tuple[Fraction, Position]] = [(t, SitePos(order[0]))]
    for a, b in zip(order, order[1:]):
        d = metric.distance(a, b)
        if d > 0:
            t += d
            waypoints.append((t, SitePos(b)))
    back = metric.distance(order[-1], order[0])
    period = t + back
    if period == 0:
        return stationary_track(SitePos(order[0]))
    return RobotTrack(period, tuple(waypoints))


# --- serialization ---------------------------------------------------------


def _pos_to_json(pos: Position) -> dict:
    if isinstance(pos, SitePos):
        return {"site": pos.site}
    if isinstance(pos, CoordPos):
        return {"coord": format_fraction(pos.x)}
    return {"edge": [pos.a, pos.b], "frac": format_fraction(pos.frac)}


def _pos_from_json(doc: dict) -> Position:
    if "site" in doc:
        return SitePos(int(doc["site"]))
    if "coord" in doc:
        return CoordPos(to_fraction(doc["coord"]))
    if "edge" in doc:
        a, b = doc["edge"]
        return normalize_position(EdgePos(int(a), int(b), to_fraction(doc["frac"])))
    raise ScheduleFormatError(f"unknown position: {doc}")


def dump_schedule(schedule: Schedule) -> str:
    robots = []
    for track in schedule.robots:
        if isinstance(track, RoundRobinTrack):
            robots.append(
                {
                    "kind": "round_robin",
                    "trees": [{"paths": [list(p) for p in paths]} for paths in track.trees],
                }
            )
        else:
            robots.append(
                {
                    "period": format_fraction(track.period),
                    "waypoints": [
                        {"t": format_fraction(t), "pos": _pos_to_json(p)}
                        for t, p in track.waypoints
                    ],
                }
            )
    return json.dumps({"robots": robots}, indent=2)


def load_schedule(data: bytes | str) -> Schedule:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ScheduleFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "robots" not in doc:
        raise ScheduleFormatError("schedule document must have a 'robots' list")
    tracks: list[Track] = []
    for robot in doc["robots"]:
        try:
            if robot.get("kind") == "round_robin":
                tracks.append(
                    RoundRobinTrack(
                        tuple(
                            tuple(tuple(int(v) for v in p) for p in tree["paths"])
                            for tree in robot["trees"]
                        )
                    )
                )
            else:
                waypoints = tuple(
                    (to_fraction(w["t"]), _pos_from_json(w["pos"]))
                    for w in robot["waypoints"]
                )
                tracks.append(RobotTrack(to_fraction(robot["period"]), waypoints))
        except ScheduleFormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ScheduleFormatError(f"malformed robot track: {exc}") from exc
    return Schedule(tuple(tracks))


def shift_track(track: RobotTrack, delta: Fraction) -> RobotTrack:
    """Rotate a track in time by delta (mod period); used by tests."""
    period = track.period
    delta = delta % period
    base = track.waypoints[0][0]
    shifted = sorted(((t - base + delta) % period, p) for t, p in track.waypoints)
    merged: list[tuple[Fraction, Position]] = []
    for t, p in shifted:
        if merged and merged[-1][0] == t:
            continue
        merged.append((t, p))
    return RobotTrack(period, tuple(merged))
