"""Component census of percolated graphs and exact small-scale tree counts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CensusError, KTooLarge, SampleGraphMismatch
from .graph import Graph
from .percolation import PercolationSample

__all__ = [
    "ComponentCensus",
    "ComponentRecord",
    "UnionFind",
    "census",
    "census_from_edges",
    "count_spanning_trees",
    "count_trees_tk",
    "giant_ratio",
    "isolated_tree_spectrum",
]

TREE, UNICYCLIC, COMPLEX = "tree", "unicyclic", "complex"
MAX_TREE_K = 7


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def roots(self) -> np.ndarray:
        """Root of every element, resolved by vectorised pointer jumping."""
        p = np.asarray(self.parent, dtype=np.int64)
        while True:
            pp = p[p]
            if np.array_equal(pp, p):
                return p
            p = pp


def classify(k: int, edges: int) -> str:
    if edges == k - 1:
        return TREE
    if edges == k:
        return UNICYCLIC
    return COMPLEX


@dataclass(frozen=True)
class ComponentRecord:
    size: int
    edges: int
    cls: str
    representative: int


@dataclass(frozen=True, eq=False)
class ComponentCensus:
    """Per-component arrays (ordered by representative) plus the size maps.

    ``C[k]`` vertices in components of size k, ``T[k]`` vertices in tree
    components of size k, ``N[k]``/``U[k]``/``COMP[k]`` the number of tree,
    unicyclic and complex components of size k. Maps hold occupied sizes only.
    """

    n: int
    sizes: np.ndarray
    edge_counts: np.ndarray
    representatives: np.ndarray
    C: dict
    T: dict
    N: dict
    U: dict
    COMP: dict
    giant_size: int
    second_size: int
    giant_edges: int
    giant_representative: int

    @property
    def records(self) -> list[ComponentRecord]:
        return [
            ComponentRecord(k, e, classify(k, e), r)
            for k, e, r in zip(
                self.sizes.tolist(), self.edge_counts.tolist(), self.representatives.tolist()
            )
        ]

    @property
    def component_count(self) -> int:
        return int(self.sizes.size)

    def unicyclic_vertices(self) -> int:
        return sum(k * u for k, u in self.U.items())

    def small_complex_count(self) -> int:
        """Complex components other than the largest one."""
        total = sum(self.COMP.values())
        giant_complex = self.giant_edges >= self.giant_size + 1
        return total - int(giant_complex)

    def to_json(self) -> dict:
        def pairs(mp):
            return [[int(k), int(v)] for k, v in sorted(mp.items())]

        return {
            "n": self.n,
            "giant_size": self.giant_size,
            "second_size": self.second_size,
            "giant_edges": self.giant_edges,
            "C": pairs(self.C),
            "T": pairs(self.T),
            "N": pairs(self.N),
            "U": pairs(self.U),
            "COMP": pairs(self.COMP),
        }


def _histogram(values, weights=None):
    if values.size == 0:
        return {}
    counts = np.bincount(values, weights=weights)
    ks = np.flatnonzero(counts)
    return {int(k): int(counts[k]) for k in ks}


def census_from_edges(n: int, edges: np.ndarray) -> ComponentCensus:
    """Census of the graph on ``0..n-1`` with the given edge rows."""
    uf = UnionFind(n)
    union = uf.union
    for u, v in edges.tolist():
        union(u, v)
    roots = uf.roots()

    vert_per_root = np.bincount(roots, minlength=n)
    edge_per_root = np.bincount(roots[edges[:, 0]], minlength=n) if len(edges) else np.zeros(n, np.int64)
    # representative = smallest vertex id in the component
    rep_of_root = np.full(n, n, dtype=np.int64)
    np.minimum.at(rep_of_root, roots, np.arange(n, dtype=np.int64))
    root_ids = np.flatnonzero(vert_per_root)
    order = np.argsort(rep_of_root[root_ids], kind="stable")
    root_ids = root_ids[order]
    sizes = vert_per_root[root_ids].astype(np.int64)
    ecount = edge_per_root[root_ids].astype(np.int64)
    reps = rep_of_root[root_ids]

    is_tree = ecount == sizes - 1
    is_uni = ecount == sizes
    is_cx = ecount >= sizes + 1
    C = _histogram(sizes, weights=sizes.astype(np.float64))
    N = _histogram(sizes[is_tree])
    T = {k: k * v for k, v in N.items()}
    U = _histogram(sizes[is_uni])
    COMP = _histogram(sizes[is_cx])

    # largest component; ties go to the smallest representative
    gi = int(np.argmax(sizes))
    second = int(np.max(np.delete(sizes, gi))) if sizes.size > 1 else 0
    return ComponentCensus(
        n=n,
        sizes=sizes,
        edge_counts=ecount,
        representatives=reps,
        C=C,
        T=T,
        N=N,
        U=U,
        COMP=COMP,
        giant_size=int(sizes[gi]),
        second_size=second,
        giant_edges=int(ecount[gi]),
        giant_representative=int(reps[gi]),
    )


def census(g: Graph, sample: PercolationSample) -> ComponentCensus:
    if sample.graph_id != g.fingerprint or sample.mask.shape[0] != g.m:
        raise SampleGraphMismatch("percolation sample was not drawn from this graph")
    return census_from_edges(g.n, g.edges[sample.mask])


def giant_ratio(c: ComponentCensus) -> tuple[float, float]:
    """(largest component / n, edges / vertices inside the largest component)."""
    if c.n == 0 or c.giant_size == 0:
        raise CensusError("empty census")
    return c.giant_size / c.n, c.giant_edges / c.giant_size


def isolated_tree_spectrum(c: ComponentCensus) -> tuple[int, float]:
    """(largest k with a tree component of size k, share of vertices on trees)."""
    largest = max(c.N) if c.N else 0
    return largest, sum(c.T.values()) / c.n


def _bareiss_det(mat):
    """Exact integer determinant by fraction-free elimination."""
    a = [row[:] for row in mat]
    size = len(a)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for i in range(size - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, size) if a[r][i] != 0), None)
            if swap is None:
                return 0
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        for r in range(i + 1, size):
            for c in range(i + 1, size):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[-1][-1]


def count_spanning_trees(vertices, adj) -> int:
    """Spanning trees of the subgraph induced on ``vertices`` (matrix-tree theorem)."""
    vs = list(vertices)
    k = len(vs)
    if k <= 1:
        return 1
    pos = {v: i for i, v in enumerate(vs)}
    lap = [[0] * k for _ in range(k)]
    for v in vs:
        i = pos[v]
        for w in adj[v]:
            j = pos.get(w)
            if j is not None:
                lap[i][j] -= 1
                lap[i][i] += 1
    return _bareiss_det([row[1:] for row in lap[1:]])


def connected_subsets(adj, k):
    """Yield every connected vertex set of size k exactly once (ESU enumeration)."""
    n = len(adj)

    def extend(sub, sub_nbhd, ext, root):
        if len(sub) == k:
            yield tuple(sorted(sub))
            return
        ext = list(ext)
        while ext:
            w = ext.pop()
            new_ext = list(ext)
            new_ext.extend(
                u for u in adj[w] if u > root and u not in sub and u not in sub_nbhd
            )
            yield from extend(sub | {w}, sub_nbhd | adj[w], new_ext, root)

    for v in range(n):
        yield from extend({v}, adj[v] | {v}, [u for u in adj[v] if u > v], v)


def count_trees_tk(g: Graph, k: int) -> int:
    """Number of subgraphs of ``g`` that are trees on exactly k vertices.

    Distinct trees on the same vertex set are counted separately, so this is
    the sum over connected k-sets of their spanning-tree counts.
    """
    if k < 1:
        raise CensusError(f"k must be positive, got {k}")
    if k > MAX_TREE_K:
        raise KTooLarge(f"k={k} exceeds the enumeration limit {MAX_TREE_K}")
    if k == 1:
        return g.n
    adj = [set(g.adjacency(u).tolist()) for u in range(g.n)]
    if k == 2:
        return g.m
    return sum(count_spanning_trees(s, adj) for s in connected_subsets(adj, k))

