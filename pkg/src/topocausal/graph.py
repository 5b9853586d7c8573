"""Graph structure and the topological queries used by the pipeline.

Networks are simple graphs (no self loops, no parallel edges) over nodes
0..n-1, either directed or undirected.  Directed networks may contain
2-cycles; they are flagged downstream, not forbidden here.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import DataError

DIRECTED = "directed"
UNDIRECTED = "undirected"


@dataclass(frozen=True)
class Triad:
    """A child node with an unordered pair of its parents (parent_a < parent_b)."""

    child: int
    parent_a: int
    parent_b: int


class Network:
    __slots__ = ("n_nodes", "mode", "_out", "_in", "_n_edges")

    def __init__(self, n_nodes: int, mode: str = DIRECTED, edges=()):
        if n_nodes < 1:
            raise DataError(f"n_nodes must be >= 1, got {n_nodes}")
        if mode not in (DIRECTED, UNDIRECTED):
            raise DataError(f"unknown mode {mode!r}")
        self.n_nodes = n_nodes
        self.mode = mode
        self._out = [set() for _ in range(n_nodes)]
        self._in = [set() for _ in range(n_nodes)] if mode == DIRECTED else self._out
        self._n_edges = 0
        for a, b in edges:
            self.add_edge(a, b)

    def _check(self, a: int, b: int) -> None:
        if not (0 <= a < self.n_nodes and 0 <= b < self.n_nodes):
            raise DataError(f"edge ({a}, {b}) out of range for {self.n_nodes} nodes")
        if a == b:
            raise DataError(f"self loop on node {a}")

    def add_edge(self, a: int, b: int) -> None:
        self._check(a, b)
        if self.mode == UNDIRECTED:
            if b in self._out[a]:
                return
            self._out[a].add(b)
            self._out[b].add(a)
        else:
            if b in self._out[a]:
                return
            self._out[a].add(b)
            self._in[b].add(a)
        self._n_edges += 1

    def remove_edge(self, a: int, b: int) -> None:
        self._check(a, b)
        if not self.has_edge(a, b):
            raise DataError(f"edge ({a}, {b}) not present")
        if self.mode == UNDIRECTED:
            self._out[a].discard(b)
            self._out[b].discard(a)
        else:
            self._out[a].discard(b)
            self._in[b].discard(a)
        self._n_edges -= 1

    def has_edge(self, a: int, b: int) -> bool:
        self._check(a, b)
        return b in self._out[a]

    @property
    def n_edges(self) -> int:
        return self._n_edges

    def edges(self) -> list[tuple[int, int]]:
        """Sorted edge list; undirected edges appear once as (min, max)."""
        if self.mode == UNDIRECTED:
            return sorted((a, b) for a in range(self.n_nodes) for b in self._out[a] if a < b)
        return sorted((a, b) for a in range(self.n_nodes) for b in self._out[a])

    def parents(self, node: int) -> list[int]:
        """In-neighbors (directed) or neighbors (undirected), ascending."""
        return sorted(self._in[node])

    def children(self, node: int) -> list[int]:
        return sorted(self._out[node])

    def neighbors(self, node: int) -> list[int]:
        if self.mode == UNDIRECTED:
            return sorted(self._out[node])
        return sorted(self._out[node] | self._in[node])

    def degree(self, node: int) -> int:
        if self.mode == UNDIRECTED:
            return len(self._out[node])
        return len(self._out[node]) + len(self._in[node])

    def copy(self) -> "Network":
        return Network(self.n_nodes, self.mode, self.edges())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.n_nodes == other.n_nodes
            and self.mode == other.mode
            and self.edges() == other.edges()
        )

    def __repr__(self) -> str:
        return f"Network(n_nodes={self.n_nodes}, mode={self.mode!r}, n_edges={self.n_edges})"


class UnionFind:
    """Disjoint sets over 0..n-1 with size tracking and running LCC size."""

    __slots__ = ("parent", "size", "n_components", "lcc_size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.n_components = n
        self.lcc_size = 1 if n else 0

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:  # path compression
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.n_components -= 1
        if self.size[ra] > self.lcc_size:
            self.lcc_size = self.size[ra]
        return True


def lcc(net: Network) -> tuple[int, frozenset[int]]:
    """Largest connected component (weak connectivity for directed graphs).

    Ties are broken by the lowest contained node id.  Returns (size, members).
    """
    uf = UnionFind(net.n_nodes)
    for a, b in net.edges():
        uf.union(a, b)
    groups: dict[int, list[int]] = {}
    for v in range(net.n_nodes):
        groups.setdefault(uf.find(v), []).append(v)
    best = max(groups.values(), key=lambda g: (len(g), -min(g)))
    return len(best), frozenset(best)


def triads(net: Network) -> list[Triad]:
    """All (child, parent pair) triples of a directed network.

    Ordered by (child, parent_a, parent_b); each unordered parent pair
    appears exactly once.
    """
    if net.mode != DIRECTED:
        raise DataError("triads are defined for directed networks")
    out = []
    for child in range(net.n_nodes):
        ps = net.parents(child)
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                out.append(Triad(child, ps[i], ps[j]))
    return out


def topological_order(net: Network) -> list[int] | None:
    """Kahn's algorithm, smallest node id first; None if the graph is cyclic."""
    if net.mode != DIRECTED:
        raise DataError("topological order is defined for directed networks")
    indeg = [len(net._in[v]) for v in range(net.n_nodes)]
    ready = [v for v in range(net.n_nodes) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in net._out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    return order if len(order) == net.n_nodes else None


def is_acyclic(net: Network) -> bool:
    return topological_order(net) is not None


def to_skeleton(net: Network) -> Network:
    """Collapse a directed network to its undirected adjacency structure."""
    if net.mode == UNDIRECTED:
        return net.copy()
    out = Network(net.n_nodes, UNDIRECTED)
    for a, b in net.edges():
        out.add_edge(a, b)
    return out


def write_edge_tsv(net: Network, path, names: list[str] | None = None) -> None:
    """One edge per line, src<TAB>dst, sorted; undirected edges as (min, max)."""
    if names is not None and len(names) != net.n_nodes:
        raise DataError(f"{len(names)} names for {net.n_nodes} nodes")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for a, b in net.edges():
            if names is None:
                fh.write(f"{a}\t{b}\n")
            else:
                fh.write(f"{names[a]}\t{names[b]}\n")


def read_edge_tsv(path, n_nodes: int, mode: str = DIRECTED,
                  names: list[str] | None = None) -> Network:
    """Read an edge-list TSV; node tokens are names (when given) or integer ids."""
    index = {name: k for k, name in enumerate(names)} if names is not None else None
    net = Network(n_nodes, mode)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{path}: line {lineno}: expected 2 fields, got {len(parts)}")
            try:
                if index is None:
                    a, b = int(parts[0]), int(parts[1])
                else:
                    a, b = index[parts[0]], index[parts[1]]
            except (ValueError, KeyError):
                raise DataError(f"{path}: line {lineno}: unknown node {parts!r}") from None
            net.add_edge(a, b)
    return net
