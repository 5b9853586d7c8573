"""Shared helpers for the test suite."""
import numpy as np

from topocausal.dataset import Dataset, Variable


def make_dataset(codes, n_states=None, names=None) -> Dataset:
    """Build a Dataset straight from an integer code matrix.

    Alphabets are digit strings '0','1',...; `n_states` may widen a column
    beyond its observed maximum (needed for states that exist but never occur).
    """
    codes = np.asarray(codes, dtype=np.int32)
    if codes.ndim != 2:
        raise ValueError("codes must be 2-D")
    n_vars = codes.shape[1]
    if n_states is None:
        n_states = [int(codes[:, v].max()) + 1 for v in range(n_vars)]
    if names is None:
        names = [f"V{v}" for v in range(n_vars)]
    variables = tuple(
        Variable(names[v], tuple(str(s) for s in range(max(2, n_states[v]))), v)
        for v in range(n_vars)
    )
    return Dataset(variables, codes)


def rows_from_counts(count_table) -> np.ndarray:
    """Expand a dict {state-tuple: count} into an explicit row matrix.

    Produces exact empirical distributions, so probability identities that
    hold for the table hold bit-for-bit for the dataset.
    """
    rows = []
    for states, k in sorted(count_table.items()):
        rows.extend([list(states)] * int(k))
    return np.asarray(rows, dtype=np.int32)


def bfs_components(n_nodes, edges):
    """Independent flood-fill component labelling (direction ignored)."""
    adj = {v: set() for v in range(n_nodes)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, comps = set(), []
    for start in range(n_nodes):
        if start in seen:
            continue
        comp, frontier = {start}, [start]
        while frontier:
            v = frontier.pop()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    frontier.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def oracle_lcc(n_nodes, edges):
    comps = bfs_components(n_nodes, edges)
    best = max(comps, key=lambda c: (len(c), -min(c)))
    return len(best), frozenset(best)


def product_dataset(marg_a, marg_b) -> Dataset:
    """Two-variable dataset whose empirical joint factorizes exactly.

    marg_a, marg_b: integer count vectors per state.  Joint count of (a, b)
    is marg_a[a] * marg_b[b], which makes every conditional of one variable
    given the other identical across conditioning states.
    """
    table = {}
    for a, ka in enumerate(marg_a):
        for b, kb in enumerate(marg_b):
            table[(a, b)] = ka * kb
    return make_dataset(rows_from_counts(table),
                        n_states=[len(marg_a), len(marg_b)])
