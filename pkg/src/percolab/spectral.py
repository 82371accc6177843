"""Second-eigenvalue estimation and edge-discrepancy audits for regular graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Disconnected, NotConverged, SpectralError, VertexOutOfRange
from .graph import Graph

__all__ = [
    "DENSE_LIMIT",
    "MixingReport",
    "SpectralEstimate",
    "estimate_lambda",
    "mixing_audit",
    "mixing_check",
]

DENSE_LIMIT = 512
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 10_000
START_SEED = 0


@dataclass(frozen=True)
class SpectralEstimate:
    lam: float
    iterations: int
    residual: float
    method: str  # "power_deflated" or "dense_exact"
    converged: bool = True


@dataclass(frozen=True)
class MixingReport:
    b_size: int
    c_size: int
    e_bc: int
    expected: float
    bound: float
    discrepancy: float
    satisfied: bool

    @property
    def ratio(self) -> float:
        """discrepancy / bound; 0 when the bound itself is 0 and so is the gap."""
        if self.bound == 0.0:
            return 0.0 if self.discrepancy == 0.0 else math.inf
        return self.discrepancy / self.bound


def estimate_lambda(
    g: Graph,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    method: str = "auto",
) -> SpectralEstimate:
    """Estimate max_{i >= 2} |lambda_i| of the adjacency matrix of ``g``.

    ``method="auto"`` uses a dense eigendecomposition for ``n <= 512`` and
    deflated power iteration otherwise; ``"dense"`` and ``"power"`` force
    one route.

    Because ``g`` is regular, the top eigenvector is the all-ones vector, so
    the operator ``x -> Ax - (d/n) * sum(x) * 1`` has the same spectrum with
    ``d`` replaced by 0. Power iteration runs on the *square* of that
    operator, so that a pair of eigenvalues ``+l`` and ``-l`` cannot make
    it oscillate; the estimate is the square root of the Rayleigh quotient.

    Raises ``Disconnected`` when ``d`` has multiplicity above one, and
    ``NotConverged`` (with the flagged best estimate on ``.estimate``) when
    ``max_iter`` runs out first.
    """
    if method == "auto":
        method = "dense" if g.n <= DENSE_LIMIT else "power"
    if method == "dense":
        return _dense(g, tol)
    if method == "power":
        return _power(g, tol, max_iter)
    raise SpectralError(f"unknown method {method!r}")


def _dense(g, tol):
    eig = np.linalg.eigvalsh(g.to_dense())
    d = g.d
    if g.n > 1 and eig[-2] >= d - max(tol, 1e-9) * d:
        raise Disconnected(f"eigenvalue {d} has multiplicity > 1")
    lam = max(abs(eig[0]), abs(eig[-2])) if g.n > 1 else 0.0
    return SpectralEstimate(float(min(lam, d)), 0, 0.0, "dense_exact")


def _power(g, tol, max_iter):
    a = g.to_scipy()
    n, d = g.n, g.d
    shift = d / n

    def apply(x):
        return a @ x - shift * x.sum()

    rng = np.random.Generator(np.random.PCG64(START_SEED))
    x = rng.standard_normal(n)
    x -= x.mean()
    x /= np.linalg.norm(x)

    mu = 0.0
    residual = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        bx = apply(x)
        y = apply(bx)
        mu = float(x @ y)
        r = np.linalg.norm(y - mu * x)
        # first-order bound on the error of sqrt(mu) given the eigen-residual of mu
        residual = float(r / (2.0 * math.sqrt(mu))) if mu > 1e-300 else float(r)
        norm = np.linalg.norm(y)
        if residual <= tol or norm == 0.0:
            break
        x = y / norm
        x -= x.mean()  # keep roundoff from reintroducing the all-ones direction

    lam = math.sqrt(max(mu, 0.0))
    converged = residual <= tol or mu == 0.0
    if lam >= d * (1 - max(10 * tol, 1e-6)):
        # Only a +d component signals disconnection; -d is just bipartiteness.
        plus = np.linalg.norm(apply(x) + d * x) / (2 * d)
        if plus > 1e-3:
            raise Disconnected(f"eigenvalue {d} has multiplicity > 1")
    est = SpectralEstimate(min(lam, float(d)), it, residual, "power_deflated", converged)
    if not converged:
        raise NotConverged(
            f"power iteration stopped after {it} iterations with residual {residual:.3g}",
            estimate=est,
        )
    return est


def _as_vertex_set(g, vs):
    arr = np.unique(np.asarray(list(vs) if not isinstance(vs, np.ndarray) else vs, dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= g.n):
        raise VertexOutOfRange(f"vertex set not contained in [0, {g.n})")
    return arr


def mixing_check(g: Graph, B, C, lam: float) -> MixingReport:
    """Compare e(B, C) with |B||C|d/n against the bound lam * sqrt(|B||C|).

    e(B, C) counts ordered pairs (u, v) with u in B, v in C and uv an edge;
    B and C may overlap or coincide.
    """
    bs = _as_vertex_set(g, B)
    cs = _as_vertex_set(g, C)
    in_c = np.zeros(g.n, dtype=bool)
    in_c[cs] = True
    nbrs = g.neighbors.reshape(g.n, g.d)
    e_bc = int(np.count_nonzero(in_c[nbrs[bs]])) if bs.size else 0
    b, c = bs.size, cs.size
    expected = b * c * g.d / g.n
    # with |B| = bn and |C| = cn the bound lam*n*sqrt(bc) is lam*sqrt(|B||C|)
    bound = lam * math.sqrt(b * c)
    disc = abs(e_bc - expected)
    satisfied = disc <= bound * (1 + 1e-12) + 1e-9
    return MixingReport(b, c, e_bc, expected, bound, disc, bool(satisfied))


def mixing_audit(g: Graph, lam: float, samples: int, seed: int) -> list[MixingReport]:
    """Run ``mixing_check`` on ``samples`` random (B, C) pairs.

    Each set has a uniform size in [1, n] and is a uniform subset of that
    size; B and C are drawn independently.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    for _ in range(samples):
        sets = []
        for _ in range(2):
            k = int(rng.integers(1, g.n + 1))
            sets.append(rng.choice(g.n, size=k, replace=False))
        out.append(mixing_check(g, sets[0], sets[1], lam))
    return out
