"""Graph primitives on the site metric.

Minimum spanning trees, tree-to-tour doubling with shortcuts, tour
partitioning, and an approximate min-max tree cover.  Everything here
is deterministic: ties break on the lowest site-index pair, so repeated
runs produce identical structures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .instance import Metric

TREE_COVER_BETA = 4  # approximation factor of tree_cover, used by all thresholds


@dataclass(frozen=True)
class Tree:
    """A tree over a subset of sites; total_length is the sum of edge lengths."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, Fraction], ...]
    total_length: Fraction

    @staticmethod
    def build(vertices: Sequence[int], edges: Sequence[tuple[int, int, Fraction]]) -> "Tree":
        total = sum((e[2] for e in edges), Fraction(0))
        return Tree(tuple(vertices), tuple(edges), total)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        for v in adj:
            adj[v].sort()
        return adj


@dataclass(frozen=True)
class Tour:
    """An open walk visiting each of its vertices once."""

    vertices: tuple[int, ...]
    length: Fraction

    @property
    def start(self) -> int:
        return self.vertices[0]


@dataclass(frozen=True)
class Path:
    """A contiguous piece of a tour."""

    vertices: tuple[int, ...]
    length: Fraction


@dataclass(frozen=True)
class TreeCover:
    trees: tuple[Tree, ...]
    max_length: Fraction


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:  # keep the smallest index as the representative
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def mst(sites: Sequence[int], metric: Metric) -> Tree:
    """Minimum spanning tree of the complete graph induced by the metric.

    Kruskal with edges ordered by (length, i, j), so the output is
    deterministic even when distances tie (including distance 0).
    """
    sites = sorted(sites)
    if not sites:
        raise ValueError("mst of an empty site set")
    if len(sites) == 1:
        return Tree.build(sites, [])
    cand = sorted(
        (metric.distance(a, b), a, b)
        for idx, a in enumerate(sites)
        for b in sites[idx + 1 :]
    )
    uf = _UnionFind(sites)
    edges: list[tuple[int, int, Fraction]] = []
    for d, a, b in cand:
        if uf.union(a, b):
            edges.append((a, b, d))
            if len(edges) == len(sites) - 1:
                break
    return Tree.build(sites, edges)


def tree_to_tour(tree: Tree, start: int, metric: Metric) -> Tour:
    """Open tour over the tree's vertices via a depth-first preorder walk.

    Doubling every tree edge gives a closed walk of length 2|T|; taking
    vertices in first-visit order and shortcutting only shrinks it, so
    the open tour has length at most 2|T|.
    """
    if start not in tree.vertices:
        raise ValueError(f"start {start} is not a vertex of the tree")
    adj = tree.adjacency()
    order: list[int] = []
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        order.append(v)
        for nb in reversed(adj[v]):  # visit lowest-index child first
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    length = sum(
        (metric.distance(a, b) for a, b in zip(order, order[1:])), Fraction(0)
    )
    return Tour(tuple(order), length)


def close_tour_length(tour: Tour, metric: Metric) -> Fraction:
    """Length of the tour with the return leg back to its start appended."""
    if len(tour.vertices) < 2:
        return Fraction(0)
    return tour.length + metric.distance(tour.vertices[-1], tour.vertices[0])


def partition_tour(tour: Tour, delta: Fraction, metric: Metric) -> list[Path]:
    """Split a tour into consecutive pieces of length <= delta.

    Cuts happen between sites; the tour edge crossing a cut is dropped
    (the boundary site stays with the earlier piece).  Each cut is made
    only when extending would exceed delta, so piece j plus its dropped
    edge sum to more than delta; hence at most ceil(len/delta) pieces.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    pieces: list[Path] = []
    current = [tour.vertices[0]]
    cur_len = Fraction(0)
    for a, b in zip(tour.vertices, tour.vertices[1:]):
        step = metric.distance(a, b)
        if cur_len + step > delta:
            pieces.append(Path(tuple(current), cur_len))
            current = [b]
            cur_len = Fraction(0)
        else:
            current.append(b)
            cur_len += step
    pieces.append(Path(tuple(current), cur_len))
    return pieces


def _components_under(tree: Tree, bound: Fraction) -> list[list[int]]:
    """Connected components of the tree after deleting edges longer than bound."""
    uf = _UnionFind(tree.vertices)
    for i, j, d in tree.edges:
        if d <= bound:
            uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for v in sorted(tree.vertices):
        groups.setdefault(uf.find(v), []).append(v)
    return [groups[r] for r in sorted(groups)]


def _chop_walk(order: list[int], bound: Fraction, metric: Metric) -> list[list[int]]:
    """Cut a vertex walk into runs of consecutive vertices, each run's
    internal length <= bound; edges between runs are dropped."""
    runs: list[list[int]] = []
    current = [order[0]]
    cur_len = Fraction(0)
    for a, b in zip(order, order[1:]):
        step = metric.distance(a, b)
        if cur_len + step > bound:
            runs.append(current)
            current = [b]
            cur_len = Fraction(0)
        else:
            current.append(b)
            cur_len += step
    runs.append(current)
    return runs


def _cover_at(base: Tree, bound: Fraction, metric: Metric) -> list[Tree]:
    """Candidate cover for deletion threshold `bound`: split the MST into
    components of short edges, walk each component, and chop the walk
    into vertex-disjoint pieces of length <= beta * bound."""
    pieces: list[Tree] = []
    for comp in _components_under(base, bound):
        members = set(comp)
        comp_edges = [
            (i, j, d) for i, j, d in base.edges if i in members and j in members
        ]
        fragment = Tree.build(comp, comp_edges)
        walk = tree_to_tour(fragment, comp[0], metric)
        for run in _chop_walk(list(walk.vertices), TREE_COVER_BETA * bound, metric):
            edges = [
                (min(a, b), max(a, b), metric.distance(a, b))
                for a, b in zip(run, run[1:])
            ]
            pieces.append(Tree.build(sorted(run), edges))
    return pieces


def tree_cover(sites: Sequence[int], metric: Metric, t: int) -> TreeCover:
    """At most t vertex-disjoint trees covering the sites, with max total
    edge length at most beta=4 times the optimal t-cover value.

    The scheme: for a threshold B, delete MST edges longer than B and
    chop each remaining fragment's walk into pieces of length <= 4B.
    Every B at or above the optimum yields at most t pieces, and any
    accepted B bounds the pieces by 4B, so bisecting B to the smallest
    accepted value gives pieces of length <= 4 * optimum.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    base = mst(sites, metric)
    if t == 1 or len(base.vertices) == 1:
        return TreeCover((base,), base.total_length)

    def attempt(bound: Fraction):
        pieces = _cover_at(base, bound, metric)
        return pieces if len(pieces) <= t else None

    best = attempt(Fraction(0))
    if best is None:
        lo, hi = Fraction(0), base.total_length
        best = attempt(hi)
        for _ in range(120):
            mid = (lo + hi) / 2
            got = attempt(mid)
            if got is None:
                lo = mid
            else:
                hi, best = mid, got
    max_len = max((p.total_length for p in best), default=Fraction(0))
    return TreeCover(tuple(best), max_len)
