"""Independent reference computations used to check the package.

Nothing here imports the code paths it checks.
"""

import math
from itertools import combinations

import numpy as np
from scipy.special import lambertw


def alpha_bar_lambertw(alpha):
    """Dual root via the Lambert W principal branch: x = -W(-alpha e^-alpha)."""
    return float(-lambertw(-alpha * math.exp(-alpha)).real)


def alpha_bar_bisect(alpha, iters=200):
    target = alpha * math.exp(-alpha)
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = (lo + hi) / 2
        if mid * math.exp(-mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def dense_lambda(n, edges):
    a = np.zeros((n, n))
    for u, v in edges:
        a[u, v] = a[v, u] = 1
    ev = np.sort(np.linalg.eigvalsh(a))
    return float(max(abs(ev[0]), abs(ev[-2])))


def dfs_components(n, edges):
    """List of (sorted vertex tuple, edge count) found by explicit DFS."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        stack, verts = [s], []
        while stack:
            x = stack.pop()
            verts.append(x)
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        vs = set(verts)
        ecount = sum(1 for u, v in edges if u in vs)
        comps.append((tuple(sorted(verts)), ecount))
    return comps


def brute_tree_count(edges, k):
    """Count (k-1)-edge subsets that form a tree spanning exactly k vertices."""
    if k == 1:
        return None  # vertices, not edge subsets
    count = 0
    for sub in combinations(edges, k - 1):
        verts = {x for e in sub for x in e}
        if len(verts) != k:
            continue
        parent = {v: v for v in verts}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for u, v in sub:
            ru, rv = find(u), find(v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
        if ok:
            count += 1
    return count


def exact_binomial_mean_sd(m, p):
    return m * p, math.sqrt(m * p * (1 - p))


def regular_branching_giant(d, p):
    """Survival probability of the root in a d-regular percolated tree.

    Children of the root have d - 1 further children each, so the
    extinction probability q solves q = (1 - p + p q)^(d-1).
    """
    from scipy.optimize import brentq

    q = brentq(lambda q: (1 - p + p * q) ** (d - 1) - q, 0.0, 1.0 - 1e-12)
    return 1.0 - (1 - p + p * q) ** d
