"""Immutable d-regular simple graphs in compressed adjacency form.

Vertices are ``0..n-1``. Every undirected edge appears once in ``edges`` as
``(u, v)`` with ``u < v``; rows are sorted lexicographically, and the row
number is the edge's canonical index. Percolation masks are indexed by it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import (
    DuplicateEdge,
    GraphError,
    GraphFormatError,
    NotRegular,
    OddDegreeSum,
    SelfLoop,
    VertexOutOfRange,
)

__all__ = ["Graph", "build_graph", "edge_between", "read_graph", "write_graph"]


def _index_dtype(n):
    return np.int32 if n < 2**31 else np.int64


def _frozen(a):
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """A validated simple d-regular graph.

    ``offsets`` and ``neighbors`` form the CSR adjacency: the sorted
    neighbours of ``u`` are ``neighbors[offsets[u]:offsets[u + 1]]``.
    """

    n: int
    d: int
    offsets: np.ndarray
    neighbors: np.ndarray
    edges: np.ndarray

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    @property
    def edge_index(self) -> np.ndarray:
        return self.edges

    def adjacency(self, u: int) -> np.ndarray:
        _check_vertex(self, u)
        return self.neighbors[self.offsets[u] : self.offsets[u + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    @cached_property
    def fingerprint(self) -> str:
        """Content hash identifying this graph; percolation samples carry it."""
        h = hashlib.blake2b(digest_size=8)
        h.update(f"{self.n} {self.d} {self.m};".encode())
        h.update(np.ascontiguousarray(self.edges, dtype=np.int64).tobytes())
        return h.hexdigest()

    def to_scipy(self):
        """Adjacency as a ``scipy.sparse.csr_matrix`` (float64), sharing no state."""
        from scipy.sparse import csr_matrix

        data = np.ones(self.neighbors.shape[0], dtype=np.float64)
        return csr_matrix(
            (data, self.neighbors.astype(np.int64), self.offsets.astype(np.int64)),
            shape=(self.n, self.n),
        )

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.float64)
        a[self.edges[:, 0], self.edges[:, 1]] = 1.0
        a[self.edges[:, 1], self.edges[:, 0]] = 1.0
        return a

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.d == other.d
            and np.array_equal(self.edges, other.edges)
        )

    def __hash__(self):
        return hash(self.fingerprint)

    def __repr__(self):
        return f"Graph(n={self.n}, d={self.d}, m={self.m})"


def _check_vertex(g, u):
    if not 0 <= u < g.n:
        raise VertexOutOfRange(f"vertex {u} not in [0, {g.n})")


def build_graph(n: int, edges: Iterable | np.ndarray) -> Graph:
    """Validate an undirected edge list and return the canonical ``Graph``.

    Raises ``SelfLoop``, ``DuplicateEdge``, ``NotRegular``,
    ``VertexOutOfRange`` or ``OddDegreeSum``.
    """
    if n < 1:
        raise GraphError(f"n must be positive, got {n}")
    arr = np.asarray(edges if isinstance(edges, np.ndarray) else list(edges), dtype=np.int64)
    if arr.size == 0:
        raise NotRegular("graph has no edges, degree would be 0")
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphError(f"edges must have shape (m, 2), got {arr.shape}")
    if arr.min() < 0 or arr.max() >= n:
        raise VertexOutOfRange(f"edge endpoint outside [0, {n})")
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    del arr
    loops = np.flatnonzero(lo == hi)
    if loops.size:
        raise SelfLoop(f"self-loop at vertex {int(lo[loops[0]])}")

    keys = lo * n + hi
    del lo, hi
    keys.sort()
    dup = np.flatnonzero(keys[1:] == keys[:-1])
    if dup.size:
        k = int(keys[dup[0]])
        raise DuplicateEdge(f"edge ({k // n}, {k % n}) appears more than once")

    idt = _index_dtype(n)
    lo = (keys // n).astype(idt)
    hi = (keys % n).astype(idt)
    del keys
    return _assemble(n, lo, hi)


def _assemble(n, lo, hi):
    """Build CSR arrays from lexicographically sorted, duplicate-free (lo, hi)."""
    m = lo.shape[0]
    fwd = np.bincount(lo, minlength=n)
    rev = np.bincount(hi, minlength=n)
    deg = fwd + rev
    d = int(deg[0])
    if np.any(deg != d):
        bad = int(np.flatnonzero(deg != d)[0])
        raise NotRegular(f"vertex {bad} has degree {int(deg[bad])}, vertex 0 has degree {d}")
    if (n * d) % 2:
        raise OddDegreeSum(f"n*d = {n * d} is odd")

    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=offsets[1:])
    idt = lo.dtype
    neighbors = np.empty(2 * m, dtype=idt)

    # Neighbours below v come from edges (w, v), those above from (v, w);
    # each group is already sorted once edges are in lexicographic order.
    fwd_start = np.zeros(n, dtype=np.int64)
    np.cumsum(fwd[:-1], out=fwd_start[1:])
    rank = np.arange(m, dtype=np.int64) - fwd_start[lo]
    neighbors[offsets[lo] + rev[lo] + rank] = hi

    order = np.argsort(hi, kind="stable")
    hs = hi[order]
    rev_start = np.zeros(n, dtype=np.int64)
    np.cumsum(rev[:-1], out=rev_start[1:])
    rank = np.arange(m, dtype=np.int64) - rev_start[hs]
    neighbors[offsets[hs] + rank] = lo[order]
    del order, hs, rank

    edges = np.empty((m, 2), dtype=idt)
    edges[:, 0] = lo
    edges[:, 1] = hi
    return Graph(n, d, _frozen(offsets), _frozen(neighbors), _frozen(edges))


def edge_between(g: Graph, u: int, v: int) -> bool:
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        return False
    nbrs = g.neighbors[g.offsets[u] : g.offsets[u + 1]]
    i = int(np.searchsorted(nbrs, v))
    return i < nbrs.shape[0] and int(nbrs[i]) == v


def write_graph(g: Graph, path) -> None:
    """Write ``g`` as a header line ``n d m`` followed by ``u v`` lines."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.d} {g.m}\n")
        np.savetxt(fh, g.edges, fmt="%d")


def read_graph(path) -> Graph:
    """Read the text format written by ``write_graph``.

    The body must already be canonical (``u < v``, sorted, unique); anything
    else is rejected with the same errors ``build_graph`` raises.
    """
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise GraphFormatError("empty graph file")
    try:
        n, d, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise GraphFormatError(f"bad header line {lines[0]!r}") from None
    if (n * d) % 2:
        raise OddDegreeSum(f"header n*d = {n * d} is odd")
    if m != n * d // 2:
        raise GraphFormatError(f"header m={m} but n*d/2={n * d // 2}")
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != m:
        raise GraphFormatError(f"header declares {m} edges, file has {len(body)}")
    edges = np.loadtxt(body, dtype=np.int64, ndmin=2) if m else np.empty((0, 2), np.int64)
    if m and edges.shape[1] != 2:
        raise GraphFormatError("edge lines must have two columns")
    if m:
        if edges.min() < 0 or edges.max() >= n:
            raise VertexOutOfRange(f"edge endpoint outside [0, {n})")
        u, v = edges[:, 0], edges[:, 1]
        if np.any(u == v):
            raise SelfLoop(f"self-loop at vertex {int(u[np.argmax(u == v)])}")
        if np.any(u > v):
            raise GraphFormatError("edge lines must satisfy u < v")
        keys = u * n + v
        if np.any(keys[1:] == keys[:-1]):
            raise DuplicateEdge("duplicate edge line")
        if np.any(keys[1:] < keys[:-1]):
            raise GraphFormatError("edge lines are not sorted")
    g = build_graph(n, edges)
    if g.d != d:
        raise NotRegular(f"header declares d={d}, edges give d={g.d}")
    return g
