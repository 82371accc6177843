import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import alpha_bar_bisect, alpha_bar_lambertw
from percolab import theory
from percolab.errors import (
    AlphaCritical,
    AlphaNotSupercritical,
    KTooLargeForBound,
    NTooSmall,
    TheoryError,
    WindowEmpty,
)
from percolab.theory import (
    expected_ck_upper,
    expected_tk_lower,
    f_closed,
    f_series,
    forbidden_interval,
    gamma_of,
    giant_edge_density,
    giant_edge_ratio,
    giant_fraction,
    largest_tree_window,
    profile,
    solve_alpha_bar,
    zeta_of,
)


def test_alpha_bar_at_two():
    ab = solve_alpha_bar(2.0)
    assert ab == pytest.approx(alpha_bar_lambertw(2.0), abs=1e-12)
    assert abs(ab - 0.406375) < 1e-6
    assert abs(ab * math.exp(-ab) - 2 * math.exp(-2)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(1.001, 30.0))
def test_alpha_bar_matches_oracles(alpha):
    ab = solve_alpha_bar(alpha)
    assert 0 < ab < 1
    assert ab == pytest.approx(alpha_bar_lambertw(alpha), rel=1e-9, abs=1e-13)
    assert ab == pytest.approx(alpha_bar_bisect(alpha), rel=1e-9, abs=1e-13)


def test_alpha_bar_near_critical():
    ab = solve_alpha_bar(1 + 1e-6)
    assert 0 < ab < 1 and abs(ab - 1) < 1e-2


@pytest.mark.parametrize("alpha", [1.0, 0.5, 0.0, -1.0])
def test_alpha_bar_rejects_subcritical(alpha):
    with pytest.raises(AlphaNotSupercritical):
        solve_alpha_bar(alpha)


@pytest.mark.parametrize("fn", [gamma_of, zeta_of, f_closed, f_series, giant_fraction])
def test_critical_refused(fn):
    with pytest.raises(AlphaCritical):
        fn(1.0)


@pytest.mark.parametrize("bad", [0.0, -2.0, float("inf"), float("nan")])
def test_non_positive_alpha_refused(bad):
    with pytest.raises(TheoryError):
        gamma_of(bad)


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9, 1.5, 2.0, 4.0])
def test_series_matches_closed_form(alpha):
    assert f_series(alpha) == pytest.approx(f_closed(alpha), abs=1e-9)


def test_series_subcritical_is_one():
    # below criticality every vertex lies in a finite tree
    for alpha in (0.1, 0.5, 0.9):
        assert f_series(alpha) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize(
    "alpha, gamma, zeta",
    [(2.0, 0.0767132, 3.25889), (0.5, 0.193147, 5.17740)],
)
def test_gamma_zeta_values(alpha, gamma, zeta):
    assert gamma_of(alpha) == pytest.approx(gamma, abs=1e-6)
    assert zeta_of(alpha) == pytest.approx(zeta, abs=1e-4)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.1, 1.5, 2.0, 3.0, 5.0])
def test_gamma_residual(alpha):
    g = gamma_of(alpha)
    assert g > 0
    assert abs(alpha * math.exp(1 - alpha + 2 * alpha * g) - 1) < 1e-12


@pytest.mark.parametrize("alpha", [1.1, 1.5, 2.0, 3.0, 5.0])
def test_profile_residuals(alpha):
    prof = profile(alpha)
    assert prof.residual_alpha_bar < 1e-12
    assert prof.residual_gamma < 1e-12


@pytest.mark.parametrize(
    "alpha, frac", [(1.5, 0.582812), (2.0, 0.796812), (3.0, 0.940480)]
)
def test_giant_fraction_values(alpha, frac):
    assert giant_fraction(alpha) == pytest.approx(frac, abs=1e-6)
    ab = alpha_bar_lambertw(alpha)
    assert giant_fraction(alpha) == pytest.approx(1 - ab / alpha, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.99])
def test_giant_fraction_subcritical(alpha):
    assert giant_fraction(alpha) == 0.0


@settings(max_examples=100, deadline=None)
@given(st.floats(1.01, 20.0))
def test_edge_identity(alpha):
    ab = solve_alpha_bar(alpha)
    lhs = giant_edge_density(alpha) / (1 - ab / alpha)
    assert lhs == pytest.approx(giant_edge_ratio(alpha), abs=1e-12)
    assert giant_edge_ratio(alpha) == pytest.approx((alpha + ab) / 2, abs=1e-15)


def test_window_example():
    n, alpha = 100_000, 2.0
    lo, hi = largest_tree_window(n, alpha, omega=3.0)
    ln = math.log(n)
    center = (ln - 2.5 * math.log(ln)) / (alpha - 1 - math.log(alpha))
    assert (lo + hi) / 2 == pytest.approx(center, abs=1e-12)
    assert (lo + hi) / 2 == pytest.approx(17.6119, abs=1e-3)
    assert hi - lo == pytest.approx(6.0)


def test_window_default_omega_and_guard():
    lo, hi = largest_tree_window(10_000, 0.5)
    assert hi - lo == pytest.approx(4 * math.log(math.log(10_000)))
    with pytest.raises(NTooSmall):
        largest_tree_window(15, 2.0)


@pytest.mark.parametrize(
    "n, alpha, lo_expected",
    [(50_000, 2.0, 70.52), (100_000, 2.0, 75.04), (50_000, 0.5, 112.04)],
)
def test_forbidden_interval(n, alpha, lo_expected):
    lo, hi = forbidden_interval(n, alpha)
    g = gamma_of(alpha)
    assert lo == pytest.approx(math.log(n) / (alpha * g), rel=1e-12)
    assert lo == pytest.approx(lo_expected, abs=0.01)
    assert hi == pytest.approx(g * n, rel=1e-12)


def test_forbidden_interval_empty():
    with pytest.raises(WindowEmpty):
        forbidden_interval(100, 1.01)


def test_lemma_bounds_k1_closed_forms():
    n, d, lam, alpha = 1000, 50, 5.0, 2.0
    xi = min(1 / d, 1 / n + lam / d)
    assert expected_ck_upper(n, d, lam, alpha, 1) == pytest.approx(n * math.exp(-alpha * (1 - xi)))
    eta = 2 / d + 2 / (alpha * d) + alpha / d
    assert expected_tk_lower(n, d, alpha, 1) == pytest.approx(n * math.exp(-alpha * (1 + eta)))


def test_lemma_bound_general_k():
    n, d, lam, alpha, k = 2000, 1999, 1.0, 0.5, 3
    xi = min(k / d, k / n + lam / d)
    w = k ** (k - 1) / math.factorial(k) * alpha ** (k - 1)
    assert expected_ck_upper(n, d, lam, alpha, k) == pytest.approx(
        n * w * math.exp(-alpha * k * (1 - xi)), rel=1e-12
    )


@pytest.mark.parametrize("k", [1, 10, 1000, 10**5, 10**6])
def test_bounds_finite_for_large_k(k):
    up = expected_ck_upper(10**9, 10**7, 100.0, 2.0, k)
    low = expected_tk_lower(10**9, 10**7, 2.0, k)
    assert math.isfinite(up) and math.isfinite(low)
    assert 0 <= low <= up


def test_tk_lower_guard():
    with pytest.raises(KTooLargeForBound):
        expected_tk_lower(1000, 20, 2.0, 3)
    assert expected_tk_lower(1000, 20, 2.0, 2) > 0


def test_profile_json_roundtrip():
    import json

    doc = profile(2.0, n=50_000).to_json()
    again = json.loads(json.dumps(doc))
    assert again["alpha_bar"] == pytest.approx(0.406376, abs=1e-6)
    assert again["forbidden_interval"][0] == pytest.approx(70.52, abs=0.01)
    assert len(again["largest_tree_window"]) == 2
    assert profile(0.5).alpha_bar is None
    assert theory.profile(2.0).largest_tree_pred(100_000) == pytest.approx(17.6119, abs=1e-3)
