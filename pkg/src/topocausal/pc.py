"""PC-stable baseline: constraint-based structure learning.

Skeleton search with Fisher-z partial-correlation tests over integer-encoded
states, conditioning sets of growing size drawn from neighborhoods frozen at
the start of each level (the order-independent variant of Colombo & Maathuis,
2014), then v-structure orientation and Meek rules 1-3.

In DAG mode edges the CPDAG leaves undirected (or orients both ways through
conflicting v-structures) are reported as 2-cycles; skeleton mode returns the
undirected skeleton.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np
from scipy.stats import norm

from .dataset import Dataset
from .errors import DataError
from .graph import DIRECTED, UNDIRECTED, Network

DAG = "dag"
SKELETON = "skeleton"

_R_CLAMP = 1.0 - 1e-12


def _partial_corr(corr: np.ndarray, x: int, y: int, cond: tuple[int, ...]) -> float:
    """Partial correlation of x, y given cond from a full correlation matrix.

    Degenerate cases (zero-variance columns, singular submatrices, perfectly
    explained pairs) return 0, i.e. they test as independent.
    """
    if not cond:
        r = corr[x, y]
        return float(r) if np.isfinite(r) else 0.0
    if len(cond) == 1:
        k = cond[0]
        r_xy, r_xk, r_yk = corr[x, y], corr[x, k], corr[y, k]
        if not (np.isfinite(r_xy) and np.isfinite(r_xk) and np.isfinite(r_yk)):
            return 0.0
        denom_sq = (1.0 - r_xk * r_xk) * (1.0 - r_yk * r_yk)
        if denom_sq <= 1e-24:
            return 0.0
        return float((r_xy - r_xk * r_yk) / np.sqrt(denom_sq))
    idx = (x, y) + cond
    sub = corr[np.ix_(idx, idx)]
    if not np.isfinite(sub).all():
        return 0.0
    try:
        prec = np.linalg.inv(sub)
    except np.linalg.LinAlgError:
        prec = np.linalg.pinv(sub)
    denom_sq = prec[0, 0] * prec[1, 1]
    if denom_sq <= 1e-24:
        return 0.0
    return float(-prec[0, 1] / np.sqrt(denom_sq))


def _fisher_z_stat(r: float, n_rows: int, n_cond: int) -> float:
    dof = n_rows - n_cond - 3
    if dof <= 0:
        return 0.0
    r = min(max(r, -_R_CLAMP), _R_CLAMP)
    return float(np.sqrt(dof) * abs(np.arctanh(r)))


def pc_skeleton(ds: Dataset, alpha: float = 0.05, max_cond: int | None = None,
                ) -> tuple[list[set[int]], dict[tuple[int, int], tuple[int, ...]]]:
    """PC-stable skeleton phase.

    Returns (adjacency sets, separating sets keyed by (min, max) pair).
    Neighborhoods are frozen per level, which makes the skeleton invariant
    under variable reorderings.
    """
    if not (0.0 < alpha < 1.0):
        raise DataError(f"alpha must be in (0, 1), got {alpha}")
    n = ds.n_vars
    data = ds.codes.astype(float)
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.corrcoef(data.T)
    cutoff = float(norm.isf(alpha / 2.0))
    adj: list[set[int]] = [set(range(n)) - {v} for v in range(n)]
    sepsets: dict[tuple[int, int], tuple[int, ...]] = {}
    level = 0
    while True:
        frozen = [tuple(sorted(adj[v])) for v in range(n)]
        if not any(len(frozen[v]) - 1 >= level for v in range(n)):
            break
        if max_cond is not None and level > max_cond:
            break
        for i in range(n):
            for j in range(i + 1, n):
                if j not in adj[i]:
                    continue
                separated = False
                for x, y in ((i, j), (j, i)):
                    pool = tuple(v for v in frozen[x] if v != y)
                    if len(pool) < level:
                        continue
                    for cond in combinations(pool, level):
                        r = _partial_corr(corr, x, y, cond)
                        if _fisher_z_stat(r, ds.n_rows, level) < cutoff:
                            sepsets[(i, j)] = cond
                            separated = True
                            break
                    if separated:
                        break
                if separated:
                    adj[i].discard(j)
                    adj[j].discard(i)
        level += 1
    return adj, sepsets


def _orient(n: int, adj: list[set[int]],
            sepsets: dict[tuple[int, int], tuple[int, ...]]) -> set[tuple[int, int]]:
    """V-structures then Meek rules 1-3; returns the set of arrow marks."""
    arrows: set[tuple[int, int]] = set()
    for k in range(n):
        nbrs = sorted(adj[k])
        for i, j in combinations(nbrs, 2):
            if j in adj[i]:
                continue  # shielded
            sep = sepsets.get((min(i, j), max(i, j)), ())
            if k not in sep:
                arrows.add((i, k))
                arrows.add((j, k))

    def directed(a: int, b: int) -> bool:
        return (a, b) in arrows and (b, a) not in arrows

    def undirected(a: int, b: int) -> bool:
        return b in adj[a] and (a, b) not in arrows and (b, a) not in arrows

    changed = True
    while changed:
        changed = False
        for a in range(n):
            for b in sorted(adj[a]):
                if not undirected(a, b):
                    continue
                oriented = False
                # Meek 1: c -> a, c not adjacent to b  =>  a -> b
                for c in range(n):
                    if c != b and directed(c, a) and b not in adj[c]:
                        oriented = True
                        break
                # Meek 2: a -> c -> b  =>  a -> b
                if not oriented:
                    for c in sorted(adj[a] & adj[b]):
                        if directed(a, c) and directed(c, b):
                            oriented = True
                            break
                # Meek 3: a - c -> b and a - d -> b, c/d non-adjacent  =>  a -> b
                if not oriented:
                    into_b = [c for c in sorted(adj[a] & adj[b])
                              if undirected(a, c) and directed(c, b)]
                    for c, d in combinations(into_b, 2):
                        if d not in adj[c]:
                            oriented = True
                            break
                if oriented:
                    arrows.add((a, b))
                    changed = True
    return arrows


def pc_baseline(ds: Dataset, alpha: float = 0.05, mode: str = DAG,
                max_cond: int | None = None) -> Network:
    """PC-stable structure estimate.

    DAG mode returns a directed network in which undirected CPDAG edges
    appear as both directions; skeleton mode returns the undirected skeleton.
    """
    if mode not in (DAG, SKELETON):
        raise DataError(f"unknown mode {mode!r}")
    n = ds.n_vars
    adj, sepsets = pc_skeleton(ds, alpha=alpha, max_cond=max_cond)
    if mode == SKELETON:
        net = Network(n, UNDIRECTED)
        for a in range(n):
            for b in adj[a]:
                if a < b:
                    net.add_edge(a, b)
        return net
    arrows = _orient(n, adj, sepsets)
    net = Network(n, DIRECTED)
    for a in range(n):
        for b in adj[a]:
            if a >= b:
                continue
            ab, ba = (a, b) in arrows, (b, a) in arrows
            if ab and not ba:
                net.add_edge(a, b)
            elif ba and not ab:
                net.add_edge(b, a)
            else:  # undirected or conflicting orientations: keep both
                net.add_edge(a, b)
                net.add_edge(b, a)
    return net
