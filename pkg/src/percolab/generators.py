"""Graph families used as percolation hosts and spectral fixtures."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegreeTooLarge,
    GeneratorError,
    NotPrime,
    OddDegreeSum,
    RetryLimitExceeded,
    UnknownFamily,
    WrongResidueClass,
)
from .graph import Graph, _assemble, _index_dtype, build_graph

__all__ = [
    "FAMILIES",
    "GeneratorSpec",
    "gen_complete",
    "gen_fixture",
    "gen_paley",
    "gen_random_regular",
    "generate",
    "is_prime",
]

FAMILIES = ("random_regular", "paley", "complete", "cycle", "petersen")

RESTART_BUDGET = 1000
REPAIR_ROUNDS = 64
SWITCH_LIMIT = 5_000_000  # larger pairings restart instead of switch-repairing
SWITCH_TRIES = 1000


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int | None = None
    d: int | None = None
    q: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnknownFamily(f"unknown graph family {self.family!r}")
        if not 0 <= self.seed < 2**64:
            raise GeneratorError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorSpec":
        allowed = {"family", "n", "d", "q", "seed"}
        extra = set(data) - allowed
        if extra:
            raise GeneratorError(f"unknown generator fields {sorted(extra)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return {k: v for k, v in vars(self).items() if v is not None}


def generate(spec: GeneratorSpec) -> Graph:
    if spec.family == "random_regular":
        if spec.n is None or spec.d is None:
            raise GeneratorError("random_regular needs n and d")
        return gen_random_regular(spec.n, spec.d, spec.seed)
    if spec.family == "paley":
        q = spec.q if spec.q is not None else spec.n
        if q is None:
            raise GeneratorError("paley needs q")
        return gen_paley(q)
    if spec.family == "complete":
        return gen_complete(spec.n)
    return gen_fixture(spec.family, spec.n)


def gen_random_regular(n: int, d: int, seed: int) -> Graph:
    """Random simple d-regular graph from the pairing (configuration) model.

    Stubs are paired by a uniform shuffle. Loops and multi-edges are then
    repaired in two stages: first by re-shuffling the stubs of every
    offending pair together with an equal number of random good pairs
    (vectorised, fast while collisions are rare), then by degree-preserving
    switches against random good pairs. A pairing that cannot be repaired
    is discarded and a fresh one drawn; after ``RESTART_BUDGET`` discarded
    pairings ``RetryLimitExceeded`` is raised.

    For d > (n-1)/2 the complement, an (n-1-d)-regular graph, is drawn
    instead and inverted.

    The output is a deterministic function of ``(n, d, seed)``.
    """
    if n < 2 or d < 1:
        raise GeneratorError(f"need n >= 2 and d >= 1, got n={n}, d={d}")
    if d >= n:
        raise DegreeTooLarge(f"d={d} must be smaller than n={n}")
    if (n * d) % 2:
        raise OddDegreeSum(f"n*d = {n * d} is odd")
    if 2 * d > n - 1:
        return _complement(n, d, seed)
    rng = np.random.Generator(np.random.PCG64(seed))
    idt = _index_dtype(n)
    for _ in range(RESTART_BUDGET):
        stubs = np.repeat(np.arange(n, dtype=idt), d)
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        del stubs
        keys = _repair(pairs, n, rng)
        if keys is not None:
            del pairs
            lo = (keys // n).astype(idt)
            hi = (keys % n).astype(idt)
            del keys
            return _assemble(n, lo, hi)
    raise RetryLimitExceeded(
        f"no simple {d}-regular pairing on {n} vertices after {RESTART_BUDGET} restarts"
    )


def _complement(n, d, seed):
    if d == n - 1:
        return gen_complete(n)
    sparse = gen_random_regular(n, n - 1 - d, seed)
    present = np.zeros((n, n), dtype=bool)
    present[sparse.edges[:, 0], sparse.edges[:, 1]] = True
    lo, hi = np.triu_indices(n, k=1)
    keep = ~present[lo, hi]
    idt = _index_dtype(n)
    return _assemble(n, lo[keep].astype(idt), hi[keep].astype(idt))


def _edge_keys(pairs, n):
    lo = np.minimum(pairs[:, 0], pairs[:, 1]).astype(np.int64)
    hi = np.maximum(pairs[:, 0], pairs[:, 1]).astype(np.int64)
    loop = lo == hi
    lo *= n
    lo += hi
    return lo, loop


def _bad_pairs(keys, loop):
    """Indices of pairs that are loops or share their key with another pair."""
    sk = np.sort(keys)
    dupvals = np.unique(sk[1:][sk[1:] == sk[:-1]])
    del sk
    bad = loop.copy()
    if dupvals.size:
        pos = np.searchsorted(dupvals, keys)
        np.minimum(pos, dupvals.size - 1, out=pos)
        bad |= dupvals[pos] == keys
    return np.flatnonzero(bad)


def _repair(pairs, n, rng):
    """Fix loops and multi-edges in place; return sorted edge keys or None."""
    m = pairs.shape[0]
    keys, loop = _edge_keys(pairs, n)
    best, stale = m + 1, 0
    for _ in range(REPAIR_ROUNDS):
        bad = _bad_pairs(keys, loop)
        if bad.size == 0:
            keys.sort()
            return keys
        if bad.size < best:
            best, stale = bad.size, 0
        else:
            stale += 1
            if stale >= 3:
                break
        good = np.ones(m, dtype=bool)
        good[bad] = False
        good_idx = np.flatnonzero(good)
        del good
        extra = min(max(bad.size, 16), good_idx.size)
        pool = np.concatenate([bad, rng.choice(good_idx, size=extra, replace=False)])
        pool.sort()
        del good_idx
        stubs = pairs[pool].reshape(-1)
        rng.shuffle(stubs)
        pairs[pool] = stubs.reshape(-1, 2)
        keys[pool], loop[pool] = _edge_keys(pairs[pool], n)
    if m > SWITCH_LIMIT:
        return None
    return _switch_repair(pairs, n, rng)


def _switch_repair(pairs, n, rng):
    """Remove bad pairs one at a time by switching with a random good pair.

    Pairs {u, v} (bad) and {x, y} (good) become {u, x} and {v, y}, accepted
    only if both new pairs are simple and absent; the number of bad pairs
    never increases.
    """
    m = pairs.shape[0]
    plist = [(int(a), int(b)) for a, b in pairs.tolist()]

    def key(a, b):
        return a * n + b if a < b else b * n + a

    count = Counter(key(a, b) for a, b in plist)

    def is_bad(i):
        a, b = plist[i]
        return a == b or count[key(a, b)] > 1

    bad = [i for i in range(m) if is_bad(i)]
    budget = SWITCH_TRIES * max(len(bad), 1)
    draws = iter(rng.integers(0, m, size=budget).tolist())
    flips = iter(rng.integers(0, 2, size=budget).tolist())
    while bad:
        i = bad[-1]
        if not is_bad(i):
            bad.pop()
            continue
        j = next(draws, None)
        if j is None:
            return None
        flip = next(flips)
        if j == i or is_bad(j):
            continue
        u, v = plist[i]
        x, y = plist[j]
        if flip:
            x, y = y, x
        if u == x or v == y:
            continue
        k1, k2 = key(u, x), key(v, y)
        if k1 == k2 or count[k1] or count[k2]:
            continue
        count[key(u, v)] -= 1
        count[key(x, y)] -= 1
        count[k1] += 1
        count[k2] += 1
        plist[i] = (u, x)
        plist[j] = (v, y)
    arr = np.array(plist, dtype=np.int64)
    pairs[:] = arr
    keys, _ = _edge_keys(arr, n)
    keys.sort()
    return keys


def is_prime(q: int) -> bool:
    """Deterministic trial division."""
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    for f in range(3, math.isqrt(q) + 1, 2):
        if q % f == 0:
            return False
    return True


def gen_paley(q: int) -> Graph:
    """Paley graph on Z_q: u ~ v iff u - v is a nonzero square mod q."""
    if not is_prime(q):
        raise NotPrime(f"{q} is not prime")
    if q % 4 != 1:
        raise WrongResidueClass(f"{q} is not 1 mod 4")
    residues = np.unique((np.arange(1, q, dtype=np.int64) ** 2) % q)
    # -1 is a square when q = 1 mod 4, so each edge is met once from r <= (q-1)/2.
    half = residues[residues <= (q - 1) // 2]
    u = np.tile(np.arange(q, dtype=np.int64), half.size)
    v = (u + np.repeat(half, q)) % q
    return build_graph(q, np.column_stack([u, v]))


def gen_complete(n: int) -> Graph:
    if n < 2:
        raise GeneratorError(f"complete graph needs n >= 2, got {n}")
    idt = _index_dtype(n)
    lo, hi = np.triu_indices(n, k=1)
    return _assemble(n, lo.astype(idt), hi.astype(idt))


_PETERSEN = [
    (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),  # outer 5-cycle
    (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),  # spokes
    (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),  # inner pentagram
]


def gen_fixture(family: str, n: int | None = None) -> Graph:
    """Fixed small fixtures: ``"cycle"`` (C_n) or ``"petersen"``."""
    if family == "cycle":
        if n is None or n < 3:
            raise GeneratorError(f"cycle needs n >= 3, got {n}")
        u = np.arange(n)
        return build_graph(n, np.column_stack([u, (u + 1) % n]))
    if family == "petersen":
        return build_graph(10, _PETERSEN)
    if family == "complete":
        return gen_complete(n)
    raise UnknownFamily(f"unknown fixture family {family!r}")
