"""The inference pipeline: weights -> threshold -> constraint stages.

Zeroth order keeps edges whose weight clears epsilon.  In DAG mode with NI
each direction is tested on its own weight, so a strong pair can enter with
both directions (the result reports 2-cycles rather than forcing a choice);
Fisher weights are symmetric, so both directions enter together.  Nodes
dropped by the knee threshold get no edges.

First order re-tests every edge against the current structure: for an edge
J -> I and each other current parent K of I, the conditional weight is the
max over state triples of |W(i | j; k)| (or the first-order partial Fisher
weight given K).  If some K drives that max to <= epsilon, the dependence is
explained away and the edge is removed.  Removals apply immediately, in a
fixed order (children ascending; parents strongest weight first), so later
tests see the updated parent sets.  In skeleton mode the conditioning
candidates are the common neighbors of the edge's endpoints and the
conditional NI is direction-free (max over both directions).
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from .dataset import Dataset
from .errors import DataError
from .graph import DIRECTED, UNDIRECTED, Network, is_acyclic
from .measures import (FISHER, NI, WeightMatrix, edge_weight_ni,
                       edge_weight_ni_given, fisher_weight, weight_matrix)
from .threshold import (CONNECTED, KNEE, LccCurve, Threshold, connected_threshold,
                        curve_from_ranked, knee_threshold, ranked_edges)

DAG = "dag"
SKELETON = "skeleton"


@dataclass(frozen=True)
class InferenceConfig:
    measure: str = NI
    threshold_method: str = KNEE
    mode: str = DAG
    max_order: int = 1

    def __post_init__(self):
        if self.measure not in (NI, FISHER):
            raise DataError(f"unknown measure {self.measure!r}")
        if self.threshold_method not in (CONNECTED, KNEE):
            raise DataError(f"unknown threshold method {self.threshold_method!r}")
        if self.mode not in (DAG, SKELETON):
            raise DataError(f"unknown mode {self.mode!r}")
        if self.max_order not in (0, 1):
            raise DataError(f"max_order must be 0 or 1, got {self.max_order}")

    def label(self) -> str:
        return {NI: "NI", FISHER: "Fisher"}[self.measure] + self.threshold_method.capitalize()


@dataclass(frozen=True)
class RemovedEdge:
    """A first-order removal: source -> target explained away given `given`."""

    source: int
    target: int
    given: int
    weight: float


@dataclass
class StageStats:
    t_weights_s: float = 0.0
    t_threshold_s: float = 0.0
    t_constrain_s: float = 0.0
    t_total_s: float = 0.0
    edges_zeroth: int = 0
    edges_final: int = 0
    removed_first: int = 0
    two_cycles: int = 0


@dataclass
class InferenceResult:
    network: Network
    epsilon: Threshold
    removed_first_order: list[RemovedEdge]
    stats: StageStats
    acyclic: bool | None
    weights: WeightMatrix
    curve: LccCurve | None = None


def count_two_cycles(net: Network) -> int:
    if net.mode != DIRECTED:
        return 0
    return sum(1 for a, b in net.edges() if a < b and net.has_edge(b, a))


def zeroth_constraint(weights: WeightMatrix, eps: Threshold, mode: str) -> Network:
    """Edges whose weight strictly exceeds eps; dropped nodes stay isolated."""
    n = weights.n
    dropped = eps.dropped_nodes
    if mode == SKELETON:
        net = Network(n, UNDIRECTED)
        pw = weights.pair_weights()
        for a in range(n):
            if a in dropped:
                continue
            for b in range(a + 1, n):
                if b not in dropped and pw[a, b] > eps.epsilon:
                    net.add_edge(a, b)
        return net
    if mode != DAG:
        raise DataError(f"unknown mode {mode!r}")
    net = Network(n, DIRECTED)
    if weights.measure == FISHER:
        pw = weights.pair_weights()
        for a in range(n):
            if a in dropped:
                continue
            for b in range(a + 1, n):
                if b not in dropped and pw[a, b] > eps.epsilon:
                    net.add_edge(a, b)
                    net.add_edge(b, a)
        return net
    w = weights.weights
    for s in range(n):
        if s in dropped:
            continue
        for t in range(n):
            if t != s and t not in dropped and w[s, t] > eps.epsilon:
                net.add_edge(s, t)
    return net


def _conditional_weight(ds: Dataset, source: int, target: int, cond: int,
                        measure: str, symmetric: bool,
                        cache: dict | None = None) -> float:
    if measure == FISHER:
        fv = fisher_weight(ds, source, target, given=cond)
        return fv.value if fv.defined else 0.0
    m = edge_weight_ni_given(ds, source, target, cond, cache=cache)
    if symmetric:
        m = max(m, edge_weight_ni_given(ds, target, source, cond, cache=cache))
    return m


def first_constraint(net: Network, ds: Dataset, eps: Threshold, measure: str,
                     weights: WeightMatrix | None = None,
                     ) -> tuple[Network, list[RemovedEdge]]:
    """Remove edges whose dependence some conditioning node explains away.

    Returns (pruned network, removals in application order).  The input is
    not mutated.
    """
    out = net.copy()
    removed: list[RemovedEdge] = []
    cache: dict = {}
    if out.mode == DIRECTED:
        def omega(src: int, dst: int) -> float:
            if weights is not None:
                return float(weights.weights[src, dst])
            if measure == NI:
                return edge_weight_ni(ds, src, dst).weight
            fv = fisher_weight(ds, src, dst)
            return fv.value if fv.defined else 0.0

        for child in range(out.n_nodes):
            parents = out.parents(child)
            if len(parents) < 2:
                continue
            ranked = sorted(parents, key=lambda p: (-omega(p, child), p))
            for parent in ranked:
                others = [k for k in out.parents(child) if k != parent]
                for k in others:  # ascending ids
                    m = _conditional_weight(ds, parent, child, k, measure,
                                            symmetric=False, cache=cache)
                    if m <= eps.epsilon:
                        out.remove_edge(parent, child)
                        removed.append(RemovedEdge(parent, child, k, m))
                        break
        return out, removed

    for a, b in net.edges():  # snapshot, ascending (a, b)
        common = sorted(set(out.neighbors(a)) & set(out.neighbors(b)))
        for k in common:
            m = _conditional_weight(ds, a, b, k, measure, symmetric=True,
                                    cache=cache)
            if m <= eps.epsilon:
                out.remove_edge(a, b)
                removed.append(RemovedEdge(a, b, k, m))
                break
    return out, removed


def _infer_with_weights(ds: Dataset, cfg: InferenceConfig, wm: WeightMatrix,
                        t_weights: float) -> InferenceResult:
    t0 = time.perf_counter()
    ranked = ranked_edges(wm)
    curve = None
    if cfg.threshold_method == KNEE:
        curve = curve_from_ranked(ranked)
        thr = knee_threshold(curve, ranked)
    else:
        thr = connected_threshold(wm)
    t1 = time.perf_counter()
    net = zeroth_constraint(wm, thr, cfg.mode)
    edges_zeroth = net.n_edges
    removed: list[RemovedEdge] = []
    if cfg.max_order >= 1:
        net, removed = first_constraint(net, ds, thr, cfg.measure, weights=wm)
    t2 = time.perf_counter()
    stats = StageStats(
        t_weights_s=t_weights,
        t_threshold_s=t1 - t0,
        t_constrain_s=t2 - t1,
        t_total_s=t_weights + (t2 - t0),
        edges_zeroth=edges_zeroth,
        edges_final=net.n_edges,
        removed_first=len(removed),
        two_cycles=count_two_cycles(net),
    )
    acyclic = is_acyclic(net) if cfg.mode == DAG else None
    return InferenceResult(net, thr, removed, stats, acyclic, wm, curve)


def infer(ds: Dataset, cfg: InferenceConfig = InferenceConfig(),
          workers: int | None = None) -> InferenceResult:
    """Run the full pipeline on a dataset.

    Deterministic: identical datasets and configs give identical networks,
    thresholds, and removal lists for any worker count.
    """
    t0 = time.perf_counter()
    wm = weight_matrix(ds, cfg.measure, workers=workers)
    t_weights = time.perf_counter() - t0
    return _infer_with_weights(ds, cfg, wm, t_weights)
