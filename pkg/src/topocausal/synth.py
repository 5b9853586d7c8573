"""Synthetic ground-truth networks, random CPTs, and ancestral sampling.

Two DAG generators:

method 1 -- start from a single sink node; every later node draws an
out-degree from a truncated (>= 1) Poisson and attaches its out-edges to
uniformly chosen existing nodes, so new nodes are causally upstream.  The
construction is acyclic and has exactly one sink.  The Poisson rate is
calibrated so the truncated mean equals mean_degree / 2, which makes the
realized mean total degree track the requested value; out-degree >= 1 caps
how sparse this method can go (mean degree ~2 at the low end).

method 2 -- independently include each edge a -> b (a < b) with probability
mean_degree / (n - 1), giving n * mean_degree / 2 expected edges over a fixed
topological order.

CPTs draw each row from a flat Dirichlet (concentration 1 by default; higher
values flatten the rows, lower values sharpen them).  State counts are uniform
on {2, 3, 4}.  Sampling is vectorized ancestral sampling in topological order
and is reproducible from (GroundTruth, seed).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .dataset import Dataset, Variable
from .errors import DataError
from .graph import DIRECTED, Network, is_acyclic, topological_order

MIN_STATES = 2
MAX_STATES = 4


@dataclass(frozen=True)
class GenSpec:
    n_nodes: int
    mean_degree: float
    method: int
    n_rows: int
    seed: int

    def __post_init__(self):
        if self.n_nodes < 2:
            raise DataError(f"n_nodes must be >= 2, got {self.n_nodes}")
        if self.mean_degree <= 0:
            raise DataError(f"mean_degree must be positive, got {self.mean_degree}")
        if self.method not in (1, 2):
            raise DataError(f"method must be 1 or 2, got {self.method}")
        if self.method == 2 and self.mean_degree > self.n_nodes - 1:
            raise DataError("method 2 needs mean_degree <= n_nodes - 1")
        if self.n_rows < 1:
            raise DataError(f"n_rows must be >= 1, got {self.n_rows}")


@dataclass
class GroundTruth:
    """A DAG with per-node state counts and CPTs.

    cpts[v] has shape (prod of parent state counts, states of v); the row
    index ravels the parent states in ascending parent id with the last
    parent varying fastest (C order).
    """

    dag: Network
    states_per_node: tuple[int, ...]
    cpts: list[np.ndarray]
    seed: object = None

    def __post_init__(self):
        if self.dag.mode != DIRECTED:
            raise DataError("ground truth needs a directed network")
        if not is_acyclic(self.dag):
            raise DataError("ground truth network must be acyclic")
        n = self.dag.n_nodes
        if len(self.states_per_node) != n or len(self.cpts) != n:
            raise DataError("states_per_node and cpts must cover every node")
        for v in range(n):
            expect_rows = int(np.prod([self.states_per_node[p] for p in self.dag.parents(v)],
                                      dtype=np.int64)) if self.dag.parents(v) else 1
            table = self.cpts[v]
            if table.shape != (expect_rows, self.states_per_node[v]):
                raise DataError(
                    f"node {v}: CPT shape {table.shape}, expected "
                    f"({expect_rows}, {self.states_per_node[v]})"
                )
            if not np.allclose(table.sum(axis=1), 1.0, atol=1e-9):
                raise DataError(f"node {v}: CPT rows must sum to 1")
            if (table < 0).any():
                raise DataError(f"node {v}: negative CPT entry")


def _truncated_poisson_rate(target_mean: float) -> float:
    """Rate lambda with E[Poisson(lambda) | >= 1] = target_mean (0 => always 1)."""
    if target_mean <= 1.0 + 1e-12:
        return 0.0

    def gap(lam: float) -> float:
        return lam / (1.0 - math.exp(-lam)) - target_mean

    return float(brentq(gap, 1e-9, 4.0 * target_mean + 10.0, xtol=1e-12))


def _draw_truncated_poisson(rng: np.random.Generator, lam: float) -> int:
    if lam <= 0.0:
        rng.random()  # keep the stream layout identical across rates
        return 1
    u = rng.random()
    norm = 1.0 - math.exp(-lam)
    pmf = lam * math.exp(-lam)  # k = 1 term
    cum = pmf / norm
    k = 1
    while cum < u and k < 1000:
        k += 1
        pmf *= lam / k
        cum += pmf / norm
    return k


def gen_method1(spec: GenSpec, rng: np.random.Generator | None = None) -> Network:
    """Recursive growth from a single sink; new nodes point at existing ones."""
    if spec.method != 1:
        raise DataError("gen_method1 takes a method-1 spec")
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    lam = _truncated_poisson_rate(spec.mean_degree / 2.0)
    net = Network(spec.n_nodes, DIRECTED)
    for v in range(1, spec.n_nodes):
        k = min(_draw_truncated_poisson(rng, lam), v)
        targets = rng.choice(v, size=k, replace=False)
        for t in sorted(int(x) for x in targets):
            net.add_edge(v, t)
    return net


def gen_method2(spec: GenSpec, rng: np.random.Generator | None = None) -> Network:
    """Independent edges over a fixed topological order (triangular adjacency)."""
    if spec.method != 2:
        raise DataError("gen_method2 takes a method-2 spec")
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    p = spec.mean_degree / (spec.n_nodes - 1)
    draw = rng.random((spec.n_nodes, spec.n_nodes))
    net = Network(spec.n_nodes, DIRECTED)
    for a in range(spec.n_nodes):
        for b in range(a + 1, spec.n_nodes):
            if draw[a, b] < p:
                net.add_edge(a, b)
    return net


def attach_cpts(dag: Network, seed, concentration: float = 1.0) -> GroundTruth:
    """Draw state counts (uniform on {2, 3, 4}) and Dirichlet CPT rows."""
    if concentration <= 0:
        raise DataError(f"concentration must be positive, got {concentration}")
    rng = np.random.default_rng(seed)
    n = dag.n_nodes
    states = tuple(int(s) for s in rng.integers(MIN_STATES, MAX_STATES + 1, size=n))
    cpts = []
    for v in range(n):
        parents = dag.parents(v)
        n_cfg = int(np.prod([states[p] for p in parents], dtype=np.int64)) if parents else 1
        cpts.append(rng.dirichlet(np.full(states[v], concentration), size=n_cfg))
    return GroundTruth(dag.copy(), states, cpts, seed=seed)


def sample(gt: GroundTruth, n_rows: int, seed) -> Dataset:
    """Ancestral sampling; one uniform draw per (node, row), in topological order."""
    if n_rows < 1:
        raise DataError(f"n_rows must be >= 1, got {n_rows}")
    rng = np.random.default_rng(seed)
    n = gt.dag.n_nodes
    order = topological_order(gt.dag)
    assert order is not None  # GroundTruth validated acyclic
    codes = np.zeros((n_rows, n), dtype=np.int32)
    for v in order:
        parents = gt.dag.parents(v)
        if parents:
            dims = [gt.states_per_node[p] for p in parents]
            cfg = np.ravel_multi_index([codes[:, p] for p in parents], dims)
        else:
            cfg = np.zeros(n_rows, dtype=np.intp)
        cdf = np.cumsum(gt.cpts[v], axis=1)
        u = rng.random(n_rows)
        drawn = (u[:, None] >= cdf[cfg]).sum(axis=1)
        codes[:, v] = np.minimum(drawn, gt.states_per_node[v] - 1)
    variables = tuple(
        Variable(name=f"V{v}", alphabet=tuple(str(s) for s in range(gt.states_per_node[v])),
                 index=v)
        for v in range(n)
    )
    return Dataset(variables, codes)


def generate(spec: GenSpec, seed=None) -> tuple[GroundTruth, Dataset]:
    """Graph + CPTs + sample with independent substreams spawned from one seed."""
    root = np.random.SeedSequence(spec.seed if seed is None else seed)
    graph_seed, cpt_seed, row_seed = root.spawn(3)
    gen = gen_method1 if spec.method == 1 else gen_method2
    dag = gen(spec, rng=np.random.default_rng(graph_seed))
    gt = attach_cpts(dag, cpt_seed)
    return gt, sample(gt, spec.n_rows, row_seed)


def _seed_for_json(seed) -> object:
    if seed is None or isinstance(seed, (int, list)):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return list(map(int, np.atleast_1d(seed.entropy))) + list(map(int, seed.spawn_key))
    try:
        return int(seed)
    except (TypeError, ValueError):
        return None


def save_ground_truth(gt: GroundTruth, path, names: list[str] | None = None) -> None:
    n = gt.dag.n_nodes
    if names is None:
        names = [f"V{v}" for v in range(n)]
    payload = {
        "n_nodes": n,
        "names": list(names),
        "states_per_node": list(gt.states_per_node),
        "edges": [list(e) for e in gt.dag.edges()],
        "cpts": [t.tolist() for t in gt.cpts],
        "seed": _seed_for_json(gt.seed),
    }
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_ground_truth(path) -> tuple[GroundTruth, list[str]]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as err:
            raise DataError(f"{path}: invalid JSON ({err})") from None
    try:
        n = payload["n_nodes"]
        dag = Network(n, DIRECTED, [tuple(e) for e in payload["edges"]])
        gt = GroundTruth(
            dag,
            tuple(payload["states_per_node"]),
            [np.asarray(t, dtype=float) for t in payload["cpts"]],
            seed=payload.get("seed"),
        )
        names = list(payload.get("names") or (f"V{v}" for v in range(n)))
    except (KeyError, TypeError) as err:
        raise DataError(f"{path}: malformed ground truth ({err})") from None
    if len(names) != n:
        raise DataError(f"{path}: {len(names)} names for {n} nodes")
    return gt, names


def exact_joint(gt: GroundTruth, limit: int = 1_000_000) -> np.ndarray:
    """Exact joint distribution by exhaustive enumeration (small networks).

    Returns an array indexed by one axis per node.  Intended as an oracle for
    estimator and sampler checks; guarded by `limit` on the state-space size.
    """
    sizes = gt.states_per_node
    total = int(np.prod(sizes, dtype=np.int64))
    if total > limit:
        raise DataError(f"state space of size {total} exceeds the enumeration limit {limit}")
    parents = [gt.dag.parents(v) for v in range(gt.dag.n_nodes)]
    joint = np.zeros(sizes, dtype=float)
    for idx in np.ndindex(*sizes):
        p = 1.0
        for v in range(gt.dag.n_nodes):
            if parents[v]:
                cfg = int(np.ravel_multi_index([idx[q] for q in parents[v]],
                                               [sizes[q] for q in parents[v]]))
            else:
                cfg = 0
            p *= gt.cpts[v][cfg][idx[v]]
        joint[idx] = p
    return joint


def exact_pair_conditionals(gt: GroundTruth, source: int, target: int) -> np.ndarray:
    """Exact W(i | j) table (source state x target state) from the joint.

    Rows with zero marginal probability (or probability 1) are NaN.
    """
    joint = exact_joint(gt)
    axes = tuple(k for k in range(joint.ndim) if k not in (source, target))
    pair = joint.sum(axis=axes)
    if source > target:
        pair = pair.T  # pair[j, i]
    p_j = pair.sum(axis=1)
    p_i = pair.sum(axis=0)
    w = np.full(pair.shape, np.nan)
    for j in range(pair.shape[0]):
        if p_j[j] <= 0.0 or p_j[j] >= 1.0:
            continue
        w[j, :] = pair[j, :] / p_j[j] - (p_i - pair[j, :]) / (1.0 - p_j[j])
    return w
