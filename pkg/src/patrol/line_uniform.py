"""Exact schedules for sites on a line.

Uniform weights: an optimal schedule is k disjoint zigzags, one per
interval of a minimum k-interval cover of the coordinates.  Arbitrary
weights with a single robot: the full-span zigzag is optimal, with a
closed-form latency per site.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import IncompatibleAlgorithmError
from .instance import Instance
from .report import SolveReport, build_report
from .schedule import Schedule, zigzag_track


@dataclass(frozen=True)
class IntervalCover:
    """Disjoint sorted intervals covering every site coordinate."""

    intervals: tuple[tuple[Fraction, Fraction], ...]
    max_length: Fraction


def _greedy_cover(points: list[Fraction], length: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Left-to-right sweep: anchor an interval at the leftmost uncovered
    point, shrink it to the last point it reaches."""
    intervals = []
    i, n = 0, len(points)
    while i < n:
        start = points[i]
        j = i
        while j + 1 < n and points[j + 1] - start <= length:
            j += 1
        intervals.append((start, points[j]))
        i = j + 1
    return intervals


def min_interval_cover(points, k: int) -> IntervalCover:
    """Exact minimum of the max interval length over covers of the points
    by at most k intervals.

    The optimum is a pairwise coordinate difference (any optimal interval
    can be shrunk to span exactly its leftmost and rightmost point), so a
    binary search over those O(n^2) candidates with the greedy sweep is
    exact.
    """
    pts = sorted(Fraction(p) for p in points)
    if not pts:
        raise ValueError("no points to cover")
    if k < 1:
        raise ValueError("k must be positive")
    candidates = sorted({b - a for i, a in enumerate(pts) for b in pts[i:]})
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if len(_greedy_cover(pts, candidates[mid])) <= k:
            hi = mid
        else:
            lo = mid + 1
    best = candidates[hi]
    intervals = _greedy_cover(pts, best)
    max_len = max(b - a for a, b in intervals)
    return IntervalCover(tuple(intervals), max_len)


def solve_line_uniform(instance: Instance, k: int) -> SolveReport:
    """Optimal uniform-weight schedule: disjoint zigzags over a minimum
    k-interval cover.  The optimum value is 2 * weight * cover length."""
    if not instance.is_line():
        raise IncompatibleAlgorithmError("line-uniform needs a line instance")
    w = instance.uniform_weight()
    if w is None:
        raise IncompatibleAlgorithmError("line-uniform needs uniform weights")
    if k < 1:
        raise ValueError("k must be positive")
    cover = min_interval_cover(instance.metric.coords, k)
    tracks = tuple(zigzag_track(a, b) for a, b in cover.intervals)
    optimum = 2 * w * cover.max_length
    return build_report(
        Schedule(tracks),
        instance,
        algo="line-uniform",
        k=k,
        L_accepted=cover.max_length,
        lower_bound=optimum,
    )


def single_zigzag_value(instance: Instance) -> Fraction:
    """Closed-form optimum for one robot sweeping the full span: the worst
    site pays twice its distance to the farther end, times its weight."""
    coords = instance.metric.coords
    left, right = min(coords), max(coords)
    return max(
        w * 2 * max(c - left, right - c) for c, w in zip(coords, instance.weights)
    )


def solve_line_single_weighted(instance: Instance) -> SolveReport:
    """Single-robot weighted line schedule: zigzag between the extremes."""
    if not instance.is_line():
        raise IncompatibleAlgorithmError("line-single needs a line instance")
    coords = instance.metric.coords
    value = single_zigzag_value(instance)
    track = zigzag_track(min(coords), max(coords))
    return build_report(
        Schedule((track,)),
        instance,
        algo="line-single",
        k=1,
        L_accepted=value,
        lower_bound=value,
    )
