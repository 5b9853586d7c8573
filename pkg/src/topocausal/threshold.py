"""Topology-derived significance thresholds.

Directed edge weights collapse to pair weights (max of the two directions);
pairs with positive weight are ranked strongest first.  Two strategies pick
the cut epsilon, both reading the graph's topology rather than a p-value:

connected -- the largest candidate epsilon such that the graph keeping pairs
with weight strictly greater than epsilon still holds every node in one
component.  Candidates are 0 plus the distinct pair weights; connectivity is
monotone in epsilon, so a binary search finds the answer.  Epsilon 0 is the
sentinel for "no edge is removable" (the cut keeps every positive pair).

knee -- remove edges weakest first, record the size of the largest connected
component after each removal, normalize both axes of that decay curve to
[0, 1], and pick the point of maximum difference between the curve and the
straight line joining its endpoints (ties: fewest edges removed).  Epsilon is
the weight of the last edge removed at the knee.  Nodes outside the LCC of
the resulting graph are dropped.  A flat or linear curve has no knee; the
connected threshold is used instead and the fallback is reported.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import DataError, NoConnectedThresholdError
from .graph import UnionFind
from .measures import WeightMatrix

CONNECTED = "connected"
KNEE = "knee"


@dataclass(frozen=True)
class RankedEdges:
    """Positive-weight pairs (a, b, weight), a < b, weight descending.

    Ties are ordered by (a, b) ascending, which fixes the removal order.
    """

    entries: tuple[tuple[int, int, float], ...]
    n_nodes: int

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class LccCurve:
    """LCC size as a function of the number of edges removed, weakest first."""

    points: tuple[tuple[int, int], ...]
    n_nodes: int

    def __post_init__(self):
        ks = [k for k, _ in self.points]
        sizes = [s for _, s in self.points]
        if ks != sorted(set(ks)):
            raise DataError("curve edge counts must be strictly increasing")
        if any(sizes[i] < sizes[i + 1] for i in range(len(sizes) - 1)):
            raise DataError("LCC size cannot grow as edges are removed")


@dataclass(frozen=True)
class Threshold:
    epsilon: float
    method: str
    dropped_nodes: frozenset[int] = frozenset()
    fell_back: bool = False
    knee_removed: int | None = None

    def __post_init__(self):
        if self.epsilon < 0:
            raise DataError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.method == CONNECTED and self.dropped_nodes:
            raise DataError("connected threshold never drops nodes")


def ranked_edges(weights: WeightMatrix) -> RankedEdges:
    pw = weights.pair_weights()
    n = weights.n
    entries = [
        (a, b, float(pw[a, b]))
        for a in range(n)
        for b in range(a + 1, n)
        if pw[a, b] > 0.0
    ]
    entries.sort(key=lambda e: (-e[2], e[0], e[1]))
    return RankedEdges(tuple(entries), n)


def curve_from_ranked(ranked: RankedEdges) -> LccCurve:
    """Insert edges strongest first, then read the record backwards."""
    uf = UnionFind(ranked.n_nodes)
    sizes_after_insert = [uf.lcc_size]  # index m: LCC with the m strongest edges
    for a, b, _ in ranked.entries:
        uf.union(a, b)
        sizes_after_insert.append(uf.lcc_size)
    total = len(ranked.entries)
    points = tuple((k, sizes_after_insert[total - k]) for k in range(total + 1))
    return LccCurve(points, ranked.n_nodes)


def lcc_curve(weights: WeightMatrix) -> LccCurve:
    return curve_from_ranked(ranked_edges(weights))


def _connected_above(ranked: RankedEdges, eps: float) -> bool:
    uf = UnionFind(ranked.n_nodes)
    for a, b, w in ranked.entries:
        if w > eps:
            uf.union(a, b)
        else:
            break  # entries are sorted descending
    return uf.n_components == 1


def _connected_from_ranked(ranked: RankedEdges) -> Threshold:
    if ranked.n_nodes < 2:
        raise DataError("connected threshold needs at least two nodes")
    if not _connected_above(ranked, 0.0):
        raise NoConnectedThresholdError(
            "the graph on all positive-weight pairs is disconnected; "
            "no connected threshold exists (the knee method still applies)"
        )
    candidates = [0.0]
    candidates.extend(sorted({w for _, _, w in ranked.entries}))
    lo, hi = 0, len(candidates) - 1
    if _connected_above(ranked, candidates[hi]):
        # cannot happen for n >= 2: the cut above the max weight keeps no edges
        return Threshold(candidates[hi], CONNECTED)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _connected_above(ranked, candidates[mid]):
            lo = mid
        else:
            hi = mid
    return Threshold(candidates[lo], CONNECTED)


def connected_threshold(weights: WeightMatrix) -> Threshold:
    """Largest epsilon whose strict cut keeps all nodes in one component."""
    return _connected_from_ranked(ranked_edges(weights))


def _lcc_members(ranked: RankedEdges, eps: float) -> frozenset[int]:
    uf = UnionFind(ranked.n_nodes)
    for a, b, w in ranked.entries:
        if w > eps:
            uf.union(a, b)
        else:
            break
    groups: dict[int, list[int]] = {}
    for v in range(ranked.n_nodes):
        groups.setdefault(uf.find(v), []).append(v)
    best = max(groups.values(), key=lambda g: (len(g), -min(g)))
    return frozenset(best)


def knee_threshold(curve: LccCurve, ranked: RankedEdges) -> Threshold:
    """Knee of the LCC decay curve; falls back to connected when degenerate."""
    if len(curve.points) < 3:
        raise DataError(f"knee needs >= 3 curve points, got {len(curve.points)}")
    total = len(ranked.entries)
    if curve.points[-1][0] != total:
        raise DataError("curve and ranked edges disagree on the edge count")
    y0 = curve.points[0][1]
    y_end = curve.points[-1][1]
    if y0 == y_end:
        return replace(_connected_from_ranked(ranked), fell_back=True)
    x_span = curve.points[-1][0] - curve.points[0][0]
    y_span = y0 - y_end
    best_k, best_d = 0, 0.0
    for k, size in curve.points:
        x = (k - curve.points[0][0]) / x_span
        y = (size - y_end) / y_span
        d = y - (1.0 - x)  # curve minus the chord from (0, 1) to (1, 0)
        if d > best_d + 1e-12:
            best_k, best_d = k, d
    if best_k == 0:
        # curve never rises above its chord: no knee
        return replace(_connected_from_ranked(ranked), fell_back=True)
    eps = ranked.entries[total - best_k][2]  # weight of the last edge removed
    members = _lcc_members(ranked, eps)
    dropped = frozenset(range(ranked.n_nodes)) - members
    return Threshold(eps, KNEE, dropped, knee_removed=best_k)


def write_curve_csv(curve: LccCurve, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("edges_removed,lcc_size\n")
        for k, size in curve.points:
            fh.write(f"{k},{size}\n")
