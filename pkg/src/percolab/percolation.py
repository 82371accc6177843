"""Random edge subsets of a host graph: the G_p and G_m models.

Every sample is a deterministic function of (graph, model, parameter, seed).
Seeds feed ``numpy.random.PCG64`` directly; per-trial seeds are derived from
a master seed with :func:`derive_seed`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import AlphaTooLarge, PercolationError, ProbabilityOutOfRange, TooManyEdges
from .graph import Graph

__all__ = [
    "RNG_NAME",
    "SPLIT_RULE",
    "PercolationSample",
    "alpha_to_m",
    "alpha_to_p",
    "derive_seed",
    "edge_uniforms",
    "percolate",
    "percolate_m",
    "percolate_m_prefix",
    "percolate_p",
    "read_mask",
    "write_mask",
]

RNG_NAME = "numpy.PCG64"
SPLIT_RULE = "SeedSequence([master_seed, trial_index]).generate_state(1, uint64)[0]"

_TWO64 = 2**64


@dataclass(frozen=True, eq=False)
class PercolationSample:
    graph_id: str
    model: str  # "G_p" or "G_m"
    param: float | int  # p for G_p, m for G_m
    seed: int
    mask: np.ndarray
    alpha: float | None = None

    @property
    def retained(self) -> int:
        return int(np.count_nonzero(self.mask))

    def retained_edges(self, g: Graph) -> np.ndarray:
        return g.edges[self.mask]


def _rng(seed):
    if not 0 <= seed < _TWO64:
        raise PercolationError(f"seed {seed} is not a 64-bit unsigned integer")
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(master_seed: int, index: int) -> int:
    """Seed for trial ``index`` of an experiment started from ``master_seed``."""
    ss = np.random.SeedSequence([int(master_seed), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def edge_uniforms(g: Graph, seed: int) -> np.ndarray:
    """Raw 64-bit draws, one per edge in canonical order.

    Edge ``e`` is kept in G_p iff ``raw[e] < p * 2**64``. Thresholding the
    same draws at two probabilities gives nested masks.
    """
    return _rng(seed).bit_generator.random_raw(g.m)


def percolate_p(g: Graph, p: float, seed: int, alpha: float | None = None) -> PercolationSample:
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ProbabilityOutOfRange(f"p={p} not in [0, 1]")
    raw = edge_uniforms(g, seed)
    if p >= 1.0:
        mask = np.ones(g.m, dtype=bool)
    else:
        mask = raw < np.uint64(int(p * _TWO64))
    mask.flags.writeable = False
    return PercolationSample(g.fingerprint, "G_p", float(p), seed, mask, alpha)


def _partial_shuffle(total, m, rng):
    """First ``m`` entries of a Fisher-Yates shuffle of ``range(total)``.

    Step ``i`` swaps position ``i`` with a uniform position in ``[i, total)``;
    the prefix for a smaller ``m`` is the prefix of the larger one.
    """
    if m == 0:
        return np.empty(0, dtype=np.int64)
    picks = rng.integers(np.arange(m, dtype=np.int64), total)
    moved: dict[int, int] = {}
    out = np.empty(m, dtype=np.int64)
    for i, j in enumerate(picks.tolist()):
        vj = moved.get(j, j)
        moved[j] = moved.get(i, i)
        out[i] = vj
    return out


def _m_order(g, m, seed):
    if not 0 <= m <= g.m:
        raise TooManyEdges(f"m={m} not in [0, {g.m}]")
    return _partial_shuffle(g.m, m, _rng(seed))


def percolate_m(g: Graph, m: int, seed: int, alpha: float | None = None) -> PercolationSample:
    """Uniform m-subset of the edges."""
    chosen = _m_order(g, m, seed)
    mask = np.zeros(g.m, dtype=bool)
    mask[chosen] = True
    mask.flags.writeable = False
    return PercolationSample(g.fingerprint, "G_m", int(m), seed, mask, alpha)


def percolate_m_prefix(g: Graph, m1: int, m2: int, seed: int):
    """Nested G_m samples: the first ``m1`` edges exposed, then ``m2``."""
    if m1 > m2:
        raise PercolationError(f"need m1 <= m2, got {m1} > {m2}")
    chosen = _m_order(g, m2, seed)
    samples = []
    for m in (m1, m2):
        mask = np.zeros(g.m, dtype=bool)
        mask[chosen[:m]] = True
        mask.flags.writeable = False
        samples.append(PercolationSample(g.fingerprint, "G_m", int(m), seed, mask))
    return tuple(samples)


def alpha_to_p(alpha: float, d: int) -> float:
    if not alpha > 0:
        raise PercolationError(f"alpha must be positive, got {alpha}")
    if alpha > d:
        raise AlphaTooLarge(f"alpha={alpha} exceeds d={d}, p would exceed 1")
    return alpha / d


def alpha_to_m(alpha: float, n: int) -> int:
    """round(alpha * n / 2), halves rounded up."""
    if not alpha > 0:
        raise PercolationError(f"alpha must be positive, got {alpha}")
    return int(math.floor(alpha * n / 2 + 0.5))


def percolate(g: Graph, model: str, alpha: float, seed: int) -> PercolationSample:
    """Sample at edge density ``alpha`` (p = alpha/d, or m = alpha*n/2)."""
    if model in ("G_p", "p"):
        return percolate_p(g, alpha_to_p(alpha, g.d), seed, alpha)
    if model in ("G_m", "m"):
        m = alpha_to_m(alpha, g.n)
        if m > g.m:
            raise AlphaTooLarge(f"alpha={alpha} asks for {m} of {g.m} edges")
        return percolate_m(g, m, seed, alpha)
    raise PercolationError(f"unknown model {model!r}")


def write_mask(sample: PercolationSample, path) -> None:
    """Dump a sample: provenance comment, ``model param seed retained``, hex mask."""
    hexmask = np.packbits(sample.mask).tobytes().hex()
    with open(path, "w") as fh:
        fh.write(
            f"# rng={RNG_NAME} split={SPLIT_RULE} graph={sample.graph_id} edges={sample.mask.size}\n"
        )
        fh.write(f"{sample.model} {sample.param!r} {sample.seed} {sample.retained}\n")
        fh.write(hexmask + "\n")


def read_mask(path) -> PercolationSample:
    lines = Path(path).read_text().splitlines()
    meta = dict(tok.split("=", 1) for tok in lines[0].lstrip("# ").split() if "=" in tok)
    model, param, seed, retained = lines[1].split()
    total = int(meta["edges"])
    bits = np.unpackbits(np.frombuffer(bytes.fromhex(lines[2].strip()), dtype=np.uint8))
    mask = bits[:total].astype(bool)
    if int(np.count_nonzero(mask)) != int(retained):
        raise PercolationError("mask popcount disagrees with header")
    mask.flags.writeable = False
    value = float(param) if model == "G_p" else int(param)
    return PercolationSample(meta["graph"], model, value, int(seed), mask)
