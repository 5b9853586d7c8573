"""Influence measures between discrete variables.

Two measures are provided.

Net influence (NI).  For a target state i of variable I, a source state j of
variable J, and an optional conditioning assignment u,

    W(i | j; u) = P(i | j, u) - P(i | j-bar, u)

where j-bar matches every state of J except j.  W lies in [-1, 1], is zero
when I and J are independent given u, and is asymmetric: it measures how much
observing J = j (versus not j) moves the probability of I = i.  It also equals
the mean of the influence distances d(j, j') = P(i | j, u) - P(i | j', u) over
the remaining source states j', weighted by P(j' | u).

Fisher weight.  The absolute z-scored Fisher transform of the Pearson (or
first-order partial) correlation of the integer-encoded columns,

    weight = sqrt(n_rows - |u| - 3) * |atanh(r)|,   r clamped to +/-(1 - 1e-12).

Symmetric in its two arguments; the same statistic drives the PC baseline.

Edge weights aggregate a measure over states: Omega(J -> I) is the maximum
|W(i | j)| over all state pairs, the maximum potential influence of J on I.
State pairs whose conditional is undefined (zero support on j or j-bar) are
skipped; if every pair is undefined the weight is 0.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataset import Assignment, Condition, Dataset, combine, prob
from .errors import DataError

NI = "ni"
FISHER = "fisher"

_R_CLAMP = 1.0 - 1e-12


@dataclass(frozen=True)
class InfluenceValue:
    """A measure value plus a definedness flag (False when support was zero)."""

    value: float
    defined: bool


UNDEFINED = InfluenceValue(0.0, False)


@dataclass(frozen=True)
class EdgeWeight:
    """Aggregated weight of variable `source` on variable `target`.

    For NI, ``argmax_states`` holds the (source state, target state) pair
    achieving the max, lexicographically smallest on ties; None when every
    state pair was undefined or the measure has no state arguments (Fisher).
    """

    source: int
    target: int
    weight: float
    argmax_states: tuple[int, int] | None = None


def _single(cond: Condition) -> Assignment:
    return Assignment((cond,))


def net_influence(ds: Dataset, target: Condition, source: Condition,
                  given: Assignment = Assignment()) -> InfluenceValue:
    """W(target | source; given) = P(t | s, g) - P(t | s-bar, g).

    Undefined (defined=False, value 0) when either conditioning event has no
    support.  Target, source, and given must be over distinct variables.
    """
    if target.negated or source.negated:
        raise DataError("net_influence takes positive target and source states")
    p_on = prob(ds, _single(target), combine(_single(source), given))
    p_off = prob(ds, _single(target), combine(_single(source.inverted()), given))
    if p_on is None or p_off is None:
        return UNDEFINED
    return InfluenceValue(p_on - p_off, True)


def influence_distance(ds: Dataset, target: Condition, source_a: Condition,
                       source_b: Condition, given: Assignment = Assignment()) -> InfluenceValue:
    """d(j, j') = P(target | j, given) - P(target | j', given), j and j' states of one variable."""
    if source_a.var != source_b.var:
        raise DataError("influence_distance compares two states of the same source variable")
    if source_a.negated or source_b.negated or target.negated:
        raise DataError("influence_distance takes positive states")
    p_a = prob(ds, _single(target), combine(_single(source_a), given))
    p_b = prob(ds, _single(target), combine(_single(source_b), given))
    if p_a is None or p_b is None:
        return UNDEFINED
    return InfluenceValue(p_a - p_b, True)


def _pair_counts(ds: Dataset, a: int, b: int) -> np.ndarray:
    """Contingency table C[state_a, state_b] via one bincount pass."""
    sa = ds.variables[a].n_states
    sb = ds.variables[b].n_states
    code = ds.codes[:, a].astype(np.int64) * sb + ds.codes[:, b]
    return np.bincount(code, minlength=sa * sb).reshape(sa, sb)


def _ni_table(counts: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """W[j, i] from a (source x target) count table over n rows.

    Returns (W, defined_row_mask).  Row j is defined iff state j and its
    complement both have support.  Count ratios reproduce the row-scan
    estimator bit for bit: same integer operands, same single division.
    """
    c_j = counts.sum(axis=1)
    c_i = counts.sum(axis=0)
    ok = (c_j > 0) & (c_j < n)
    w = np.zeros(counts.shape, dtype=float)
    if ok.any():
        cj = c_j[ok][:, None]
        p_on = counts[ok] / cj
        p_off = (c_i[None, :] - counts[ok]) / (n - cj)
        w[ok] = p_on - p_off
    return w, ok


def _edge_weight_from_table(counts: np.ndarray, n: int) -> tuple[float, tuple[int, int] | None]:
    w, ok = _ni_table(counts, n)
    if not ok.any():
        return 0.0, None
    absw = np.abs(w)
    absw[~ok] = -1.0
    flat = int(np.argmax(absw))  # first max in row-major order = smallest (j, i)
    j, i = divmod(flat, counts.shape[1])
    return float(absw[j, i]), (int(j), int(i))


def edge_weight_ni(ds: Dataset, source: int, target: int) -> EdgeWeight:
    """Omega(source -> target): max over state pairs of |W(i | j)|."""
    if source == target:
        raise DataError("edge weight needs two distinct variables")
    counts = _pair_counts(ds, source, target)
    weight, arg = _edge_weight_from_table(counts, ds.n_rows)
    return EdgeWeight(source, target, weight, arg)


def _triple_counts(ds: Dataset, trio: tuple[int, int, int]) -> np.ndarray:
    """Three-way contingency table indexed in `trio` order (one bincount pass)."""
    a, b, c = trio
    sa = ds.variables[a].n_states
    sb = ds.variables[b].n_states
    sc = ds.variables[c].n_states
    code = (ds.codes[:, a].astype(np.int64) * sb + ds.codes[:, b]) * sc + ds.codes[:, c]
    return np.bincount(code, minlength=sa * sb * sc).reshape(sa, sb, sc)


def edge_weight_ni_given(ds: Dataset, source: int, target: int, cond: int,
                         cache: dict | None = None) -> float:
    """Max over (i, j, k) states of |W(i | j; k)| for conditioning variable `cond`.

    Strata or state pairs with undefined conditionals contribute 0 (which
    favors first-order removal); the result is always defined.  `cache` maps
    sorted variable triples to their count tables: the first-order constraint
    queries each triple several times (both edge directions, swapped roles of
    parent and conditioner), and the counts are shared.
    """
    if len({source, target, cond}) != 3:
        raise DataError("conditional edge weight needs three distinct variables")
    trio = tuple(sorted((source, target, cond)))
    if cache is None or trio not in cache:
        counts = _triple_counts(ds, trio)
        if cache is not None:
            cache[trio] = counts
    else:
        counts = cache[trio]
    table = counts.transpose(
        (trio.index(cond), trio.index(source), trio.index(target)))
    # all strata at once: W[k, j, i] defined where stratum k is non-empty and
    # source state j has support strictly between 0 and the stratum size
    c_j = table.sum(axis=2)
    c_i = table.sum(axis=1)
    n_k = c_j.sum(axis=1)
    ok = (c_j > 0) & (c_j < n_k[:, None])
    if not ok.any():
        return 0.0
    w = np.zeros(table.shape, dtype=float)
    cj = c_j[ok][:, None]
    nk = np.broadcast_to(n_k[:, None], c_j.shape)[ok][:, None]
    w[ok] = table[ok] / cj - (c_i[:, None, :] - table)[ok] / (nk - cj)
    return float(np.abs(w[ok]).max())


def _corr(x: np.ndarray, y: np.ndarray) -> float | None:
    """Pearson correlation; None when a column has zero variance."""
    if x.min() == x.max() or y.min() == y.max():
        return None
    return float(np.corrcoef(x, y)[0, 1])


def _fisher_stat(r: float, n_rows: int, n_cond: int) -> float:
    r = min(max(r, -_R_CLAMP), _R_CLAMP)
    return float(np.sqrt(n_rows - n_cond - 3) * abs(np.arctanh(r)))


def fisher_weight(ds: Dataset, a: int, b: int, given: int | None = None) -> InfluenceValue:
    """Fisher z weight of variables a and b, optionally partialling out one variable.

    Undefined for zero-variance columns or a degenerate partial (a conditioning
    column that already determines a or b).  Symmetric: the two variables are
    ordered internally so fisher_weight(a, b) == fisher_weight(b, a) exactly.
    """
    if a == b or given in (a, b):
        raise DataError("fisher_weight needs distinct variables")
    n_cond = 0 if given is None else 1
    if ds.n_rows <= 3 + n_cond:
        raise DataError(f"fisher weight needs more than {3 + n_cond} rows, got {ds.n_rows}")
    lo, hi = (a, b) if a < b else (b, a)
    x = ds.codes[:, lo].astype(float)
    y = ds.codes[:, hi].astype(float)
    if given is None:
        r = _corr(x, y)
        if r is None:
            return UNDEFINED
        return InfluenceValue(_fisher_stat(r, ds.n_rows, 0), True)
    z = ds.codes[:, given].astype(float)
    r_xy, r_xz, r_yz = _corr(x, y), _corr(x, z), _corr(y, z)
    if r_xy is None or r_xz is None or r_yz is None:
        return UNDEFINED
    denom_sq = (1.0 - r_xz * r_xz) * (1.0 - r_yz * r_yz)
    if denom_sq <= 1e-24:
        return UNDEFINED
    r = (r_xy - r_xz * r_yz) / np.sqrt(denom_sq)
    return InfluenceValue(_fisher_stat(r, ds.n_rows, 1), True)


@dataclass
class WeightMatrix:
    """Dense n x n edge weights; weights[source, target], diagonal 0.

    For NI, arg_source_state/arg_target_state hold the maximizing state pair
    (-1 where not applicable).  Fisher matrices are exactly symmetric.
    """

    measure: str
    weights: np.ndarray
    arg_source_state: np.ndarray
    arg_target_state: np.ndarray

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def entry(self, source: int, target: int) -> EdgeWeight:
        js = int(self.arg_source_state[source, target])
        ti = int(self.arg_target_state[source, target])
        arg = (js, ti) if js >= 0 else None
        return EdgeWeight(source, target, float(self.weights[source, target]), arg)

    def pair_weights(self) -> np.ndarray:
        """Symmetric pair-level weights: max of the two directions."""
        return np.maximum(self.weights, self.weights.T)


def _fill_ni_pairs(ds: Dataset, pairs, weights, arg_s, arg_t) -> None:
    n = ds.n_rows
    for a, b in pairs:
        counts = _pair_counts(ds, a, b)
        w_ab, arg_ab = _edge_weight_from_table(counts, n)
        w_ba, arg_ba = _edge_weight_from_table(counts.T, n)
        weights[a, b] = w_ab
        weights[b, a] = w_ba
        if arg_ab is not None:
            arg_s[a, b], arg_t[a, b] = arg_ab
        if arg_ba is not None:
            arg_s[b, a], arg_t[b, a] = arg_ba


def weight_matrix(ds: Dataset, measure: str = NI, workers: int | None = None) -> WeightMatrix:
    """All pairwise edge weights for the requested measure.

    `workers` > 1 splits the pair loop over threads (NI); every cell is an
    independent computation, so results are bit-identical for any setting.
    """
    if measure not in (NI, FISHER):
        raise DataError(f"unknown measure {measure!r}")
    n = ds.n_vars
    if n < 2:
        raise DataError("weight matrix needs at least two variables")
    weights = np.zeros((n, n), dtype=float)
    arg_s = np.full((n, n), -1, dtype=np.int32)
    arg_t = np.full((n, n), -1, dtype=np.int32)

    if measure == FISHER:
        if ds.n_rows <= 3:
            raise DataError("fisher weights need more than 3 rows")
        data = ds.codes.astype(float)
        stds = data.std(axis=0)
        live = stds > 0
        if live.sum() >= 2:
            with np.errstate(invalid="ignore", divide="ignore"):
                corr = np.corrcoef(data.T)
            scale = np.sqrt(ds.n_rows - 3)
            for a in range(n):
                for b in range(a + 1, n):
                    if live[a] and live[b]:
                        r = min(max(float(corr[a, b]), -_R_CLAMP), _R_CLAMP)
                        w = scale * abs(np.arctanh(r))
                        weights[a, b] = weights[b, a] = w
        return WeightMatrix(FISHER, weights, arg_s, arg_t)

    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    if workers is not None and workers > 1 and len(pairs) > 1:
        chunks = [pairs[k::workers] for k in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            jobs = [
                pool.submit(_fill_ni_pairs, ds, chunk, weights, arg_s, arg_t)
                for chunk in chunks if chunk
            ]
            for job in jobs:
                job.result()
    else:
        _fill_ni_pairs(ds, pairs, weights, arg_s, arg_t)
    return WeightMatrix(NI, weights, arg_s, arg_t)


def dump_weights(wm: WeightMatrix, path, names: list[str] | None = None) -> None:
    """TSV dump of all off-diagonal entries, sorted by (source, target).

    Columns: src, dst, weight, and for NI the maximizing source/target states.
    """
    def label(k: int) -> str:
        return names[k] if names is not None else str(k)

    with_args = wm.measure == NI
    with open(path, "w", encoding="utf-8", newline="") as fh:
        header = ["src", "dst", "weight"] + (["arg_j", "arg_i"] if with_args else [])
        fh.write("\t".join(header) + "\n")
        for s in range(wm.n):
            for t in range(wm.n):
                if s == t:
                    continue
                row = [label(s), label(t), repr(float(wm.weights[s, t]))]
                if with_args:
                    row += [str(int(wm.arg_source_state[s, t])),
                            str(int(wm.arg_target_state[s, t]))]
                fh.write("\t".join(row) + "\n")
