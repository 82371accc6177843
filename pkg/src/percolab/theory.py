"""Analytic predictions for percolation at edge density alpha = p * d.

Logarithms are natural. Every function refuses alpha within ``CRITICAL_EPS``
of 1.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import (
    AlphaCritical,
    AlphaNotSupercritical,
    KTooLargeForBound,
    NTooSmall,
    TheoryError,
    WindowEmpty,
)

__all__ = [
    "TheoryProfile",
    "expected_ck_upper",
    "expected_tk_lower",
    "f_closed",
    "f_series",
    "forbidden_interval",
    "gamma_of",
    "giant_edge_density",
    "giant_edge_ratio",
    "giant_fraction",
    "largest_tree_window",
    "profile",
    "solve_alpha_bar",
    "zeta_of",
]

CRITICAL_EPS = 1e-9
MAX_SERIES_TERMS = 100_000


def _check_alpha(alpha):
    if not alpha > 0 or math.isinf(alpha):
        raise TheoryError(f"alpha must be a positive finite number, got {alpha}")
    if abs(alpha - 1.0) < CRITICAL_EPS:
        raise AlphaCritical(f"alpha={alpha} is critical")


def solve_alpha_bar(alpha: float) -> float:
    """Root in (0, 1) of x*exp(-x) = alpha*exp(-alpha), for alpha > 1.

    Bisection: x*exp(-x) is increasing on (0, 1), so the bracket
    (1e-15, 1) always holds the root. Runs until the bracket stops shrinking.
    """
    if not alpha > 1.0:
        raise AlphaNotSupercritical(f"alpha={alpha} is not > 1")
    if math.isinf(alpha):
        raise TheoryError("alpha must be finite")
    target = alpha * math.exp(-alpha)
    lo, hi = 1e-15, 1.0
    if lo * math.exp(-lo) >= target:
        return lo
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if mid * math.exp(-mid) < target:
            lo = mid
        else:
            hi = mid
    # pick whichever endpoint has the smaller residual
    if abs(lo * math.exp(-lo) - target) <= abs(hi * math.exp(-hi) - target):
        return lo
    return hi


def f_closed(alpha: float) -> float:
    _check_alpha(alpha)
    if alpha < 1:
        return 1.0
    return solve_alpha_bar(alpha) / alpha


def f_series(alpha: float, eps: float = 1e-15) -> float:
    """sum_{k>=1} k^(k-1)/k! * alpha^(k-1) * exp(-alpha*k), summed in log space.

    Stops at the first term below ``eps`` times the running sum, or after
    ``MAX_SERIES_TERMS`` terms.
    """
    _check_alpha(alpha)
    la = math.log(alpha)
    total = 0.0
    for k in range(1, MAX_SERIES_TERMS + 1):
        term = math.exp((k - 1) * math.log(k) - math.lgamma(k + 1) + (k - 1) * la - alpha * k)
        total += term
        if term < eps * total:
            break
    return total


def gamma_of(alpha: float) -> float:
    """The gamma > 0 with alpha * exp(1 - alpha + 2*alpha*gamma) = 1."""
    _check_alpha(alpha)
    return (alpha - 1.0 - math.log(alpha)) / (2.0 * alpha)


def zeta_of(alpha: float) -> float:
    """1 / (alpha - 1 - ln alpha): the scale of the largest isolated tree."""
    _check_alpha(alpha)
    return 1.0 / (alpha - 1.0 - math.log(alpha))


def giant_fraction(alpha: float) -> float:
    _check_alpha(alpha)
    if alpha < 1:
        return 0.0
    return 1.0 - solve_alpha_bar(alpha) / alpha


def giant_edge_ratio(alpha: float) -> float:
    """Edges per vertex inside the giant, (alpha + alpha_bar) / 2."""
    return 0.5 * (alpha + solve_alpha_bar(alpha))


def giant_edge_density(alpha: float) -> float:
    """Giant-component edges per host vertex, alpha * (1/2 - alpha_bar^2 / (2 alpha^2))."""
    ab = solve_alpha_bar(alpha)
    return alpha * (0.5 - ab * ab / (2.0 * alpha * alpha))


def _xi(n, d, lam, k):
    return min(k / d, k / n + lam / d)


def _eta(d, alpha, k):
    return 2 * k / d + 2 * k / (alpha * d) + alpha / d


def _tree_log_weight(k, alpha):
    # ln( k^(k-1)/k! * alpha^(k-1) )
    return (k - 1) * math.log(k) - math.lgamma(k + 1) + (k - 1) * math.log(alpha)


def expected_ck_upper(n: int, d: int, lam: float, alpha: float, k: int) -> float:
    """Upper bound on E[C_k], vertices in size-k components of G_p with p = alpha/d."""
    if k < 1 or n < 1 or d < 1 or not alpha > 0 or lam < 0:
        raise TheoryError("need k, n, d >= 1, alpha > 0, lam >= 0")
    xi = _xi(n, d, lam, k)
    return math.exp(math.log(n) + _tree_log_weight(k, alpha) - alpha * k * (1.0 - xi))


def expected_tk_lower(n: int, d: int, alpha: float, k: int) -> float:
    """Lower bound on E[T_k], vertices in isolated trees of size k.

    Only offered for k <= d/10.
    """
    if k < 1 or n < 1 or d < 1 or not alpha > 0:
        raise TheoryError("need k, n, d >= 1 and alpha > 0")
    if k > d / 10:
        raise KTooLargeForBound(f"k={k} is not small against d={d} (need k <= d/10)")
    eta = _eta(d, alpha, k)
    return math.exp(math.log(n) + _tree_log_weight(k, alpha) - alpha * k * (1.0 + eta))


def default_omega(n: int) -> float:
    return 2.0 * math.log(math.log(n))


def largest_tree_window(n: int, alpha: float, omega: float | None = None) -> tuple[float, float]:
    """zeta * (ln n - 2.5 ln ln n) -/+ omega."""
    _check_alpha(alpha)
    if n < 16:
        raise NTooSmall(f"n={n} < 16")
    if omega is None:
        omega = default_omega(n)
    ln = math.log(n)
    center = zeta_of(alpha) * (ln - 2.5 * math.log(ln))
    return center - omega, center + omega


def forbidden_interval(n: int, alpha: float) -> tuple[float, float]:
    """[ln n / (alpha * gamma), gamma * n]: sizes no component should have."""
    g = gamma_of(alpha)
    lo = math.log(n) / (alpha * g)
    hi = g * n
    if lo >= hi:
        raise WindowEmpty(f"interval [{lo:.4g}, {hi:.4g}] is empty at n={n}")
    return lo, hi


@dataclass(frozen=True)
class TheoryProfile:
    alpha: float
    alpha_bar: float | None
    gamma: float
    zeta: float
    f_alpha: float
    giant_fraction: float
    giant_edge_ratio: float | None
    residual_alpha_bar: float | None
    residual_gamma: float
    n: int | None = None
    omega: float | None = None
    largest_tree_window: tuple[float, float] | None = None
    forbidden_interval: tuple[float, float] | None = None

    def largest_tree_pred(self, n: int) -> float:
        center, _ = largest_tree_window(n, self.alpha, 0.0)
        return center

    def to_json(self) -> dict:
        out = asdict(self)
        for key in ("largest_tree_window", "forbidden_interval"):
            if out[key] is not None:
                out[key] = list(out[key])
        return out


def profile(alpha: float, n: int | None = None, omega: float | None = None) -> TheoryProfile:
    _check_alpha(alpha)
    gamma = gamma_of(alpha)
    res_gamma = abs(alpha * math.exp(1 - alpha + 2 * alpha * gamma) - 1.0)
    if alpha > 1:
        ab = solve_alpha_bar(alpha)
        res_ab = abs(ab * math.exp(-ab) - alpha * math.exp(-alpha))
        ratio = 0.5 * (alpha + ab)
    else:
        ab = res_ab = ratio = None
    window = interval = None
    if n is not None:
        if omega is None:
            omega = default_omega(n) if n >= 16 else None
        if n >= 16:
            window = largest_tree_window(n, alpha, omega)
        try:
            interval = forbidden_interval(n, alpha)
        except WindowEmpty:
            interval = None
    return TheoryProfile(
        alpha=alpha,
        alpha_bar=ab,
        gamma=gamma,
        zeta=zeta_of(alpha),
        f_alpha=f_closed(alpha),
        giant_fraction=giant_fraction(alpha),
        giant_edge_ratio=ratio,
        residual_alpha_bar=res_ab,
        residual_gamma=res_gamma,
        n=n,
        omega=omega,
        largest_tree_window=window,
        forbidden_interval=interval,
    )
