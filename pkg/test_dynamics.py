import math

import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import LengthMismatch, NoEquilibrium
from data_types import GammaPathKind, PriceResponse, ShockKind
from schemas.dynamics import GammaPath
from schemas.economy import GrowthProcess, Preferences
from services import dynamics, pricing_core

GROWTH = GrowthProcess(mu=0.018, sigma2=0.0013)


def _prefs(rho: float, gamma: float = 2.0) -> Preferences:
    return Preferences(delta=0.02, rho=rho, gamma=gamma)


def test_gamma_path_shapes():
    step = GammaPath.permanent_step(2.0, 0.5, shock_time=3)
    assert step.settle_time == 3
    assert step.values(5).tolist() == [2.0, 2.0, 2.0, 2.5, 2.5, 2.5]

    pulse = GammaPath.transitory_pulse(2.0, 0.5, shock_time=2)
    assert pulse.settle_time == 3
    assert pulse.values(4).tolist() == [2.0, 2.0, 2.5, 2.0, 2.0]
    assert pulse.gamma_infinity == 2.0

    custom = GammaPath.custom([2.0, 3.5, 2.5], terminal_gamma=3.0)
    assert custom.kind is GammaPathKind.CUSTOM
    assert custom.settle_time == 3
    assert custom.values(4).tolist() == [2.0, 3.5, 2.5, 3.0, 3.0]

    constant = GammaPath.constant(4.0)
    assert constant.settle_time == 0
    assert constant.gamma_at(100) == 4.0


def test_gamma_path_validation():
    with pytest.raises(ValidationError, match="shock_time"):
        GammaPath.permanent_step(2.0, 0.5, shock_time=0)
    with pytest.raises(ValidationError, match="positive"):
        GammaPath.transitory_pulse(2.0, -2.0)
    with pytest.raises(ValidationError):
        GammaPath(kind=GammaPathKind.CUSTOM, base_gamma=2.0, custom_values=(2.0,))
    with pytest.raises(ValidationError):
        GammaPath(kind=GammaPathKind.CONSTANT, base_gamma=2.0, terminal_gamma=3.0)
    with pytest.raises(ValueError):
        GammaPath.constant(2.0).gamma_at(-1)


def test_constant_path_h_matches_static():
    prefs = _prefs(0.5)
    h = dynamics.h_path(GammaPath.constant(2.0), prefs, GROWTH, horizon=6)
    assert h.shape == (7,)
    np.testing.assert_allclose(h, pricing_core.h_value(prefs, GROWTH), rtol=1e-12)


def test_constant_path_ratio_matches_static():
    for rho in (0.25, 0.5, 2.0, 4.0):
        prefs = _prefs(rho, gamma=3.0)
        solution = dynamics.solve_c_path(GammaPath.constant(3.0), prefs, GROWTH, horizon=8)
        np.testing.assert_allclose(solution.c, pricing_core.price_dividend_ratio(prefs, GROWTH), rtol=1e-12)


def test_permanent_step_low_rho_lowers_ratio():
    solution = dynamics.solve_c_path(GammaPath.permanent_step(2.0, 0.5), _prefs(0.5), GROWTH, horizon=5)
    assert solution.c_series[1] < solution.c_series[0]
    assert solution.terminal_c == pytest.approx(
        pricing_core.price_dividend_ratio(_prefs(0.5, 2.5), GROWTH), rel=1e-12
    )
    assert solution.gamma_series[0] == 2.0 and solution.gamma_series[1] == 2.5


def test_permanent_step_high_rho_raises_ratio():
    solution = dynamics.solve_c_path(GammaPath.permanent_step(2.0, 0.5), _prefs(2.0), GROWTH, horizon=5)
    assert solution.c_series[1] > solution.c_series[0]


def test_dynamic_rates_follow_gamma_path():
    path = GammaPath.transitory_pulse(2.0, 1.0, shock_time=2)
    prefs = _prefs(0.5)
    solution = dynamics.solve_c_path(path, prefs, GROWTH, horizon=4)
    for t in range(5):
        prefs_t = prefs.with_gamma(path.gamma_at(t))
        assert solution.ln_rf_series[t] == pytest.approx(pricing_core.risk_free_rate(prefs_t, GROWTH), abs=1e-14)
        assert solution.premium_series[t] == pytest.approx(pricing_core.equity_premium(prefs_t, GROWTH), abs=1e-14)


def test_backward_recursion_difference_equation():
    path = GammaPath.custom([2.0, 3.5, 2.5, 6.0], terminal_gamma=3.0)
    solution = dynamics.solve_c_path(path, _prefs(0.5), GROWTH, horizon=7)
    h = np.asarray(solution.h_series)
    c = solution.c
    np.testing.assert_allclose(c[:-1], h[:-1] * (1.0 + c[1:]), rtol=1e-12)


@pytest.mark.parametrize("path", [
    GammaPath.permanent_step(2.0, 0.5, shock_time=2),
    GammaPath.transitory_pulse(2.0, 1.0, shock_time=3),
    GammaPath.custom([2.0, 3.5, 2.5], terminal_gamma=3.0),
    GammaPath.constant(2.0),
])
@pytest.mark.parametrize("rho", [0.5, 2.0])
def test_forward_series_matches_backward_recursion(path, rho):
    prefs = _prefs(rho)
    horizon = path.settle_time + 2
    solution = dynamics.solve_c_path(path, prefs, GROWTH, horizon)
    for t in range(horizon + 1):
        oracle = dynamics.forward_series_oracle(path, prefs, GROWTH, t, truncation_tol=1e-12)
        assert oracle == pytest.approx(solution.c_series[t], rel=1e-10)


def test_forward_series_geometric_sum():
    prefs = _prefs(0.5)
    h = pricing_core.h_value(prefs, GROWTH)
    oracle = dynamics.forward_series_oracle(GammaPath.constant(2.0), prefs, GROWTH, 0)
    assert oracle == pytest.approx(h / (1.0 - h), rel=1e-10)


def test_required_terms_bound():
    n = dynamics.required_terms(0.9, 1e-12)
    assert 0.9 ** n / (1.0 - 0.9) <= 1e-12 * (1.0 + 1e-9)
    assert n == math.ceil(math.log(1e-12 * 0.1) / math.log(0.9))


def test_divergent_terminal_gamma():
    prefs = Preferences(delta=0.0, rho=0.5, gamma=2.0)
    riskless = GrowthProcess(mu=0.0, sigma2=0.0)
    with pytest.raises(NoEquilibrium):
        dynamics.solve_c_path(GammaPath.constant(2.0), prefs, riskless, horizon=3)
    with pytest.raises(NoEquilibrium):
        dynamics.forward_series_oracle(GammaPath.constant(2.0), prefs, riskless, 0)


def test_horizon_must_reach_settle_time():
    with pytest.raises(ValueError):
        dynamics.solve_c_path(GammaPath.permanent_step(2.0, 0.5, shock_time=5), _prefs(0.5), GROWTH, horizon=3)


@pytest.mark.parametrize("shock_delta", [-1.0, -0.5, 0.5, 1.0])
@pytest.mark.parametrize("rho", [0.25, 0.5, 2.0, 4.0])
@pytest.mark.parametrize("kind", [ShockKind.PERMANENT, ShockKind.TRANSITORY])
def test_sign_of_price_response(shock_delta, rho, kind):
    prefs = _prefs(rho)
    if kind is ShockKind.PERMANENT:
        path = GammaPath.permanent_step(2.0, shock_delta, shock_time=2)
    else:
        path = GammaPath.transitory_pulse(2.0, shock_delta, shock_time=2)
    solution = dynamics.solve_c_path(path, prefs, GROWTH, horizon=6)

    expected = PriceResponse.FALLS if shock_delta * (1.0 - rho) > 0.0 else PriceResponse.RISES
    assert dynamics.classify_price_response(shock_delta, prefs, GROWTH, kind) is expected
    assert dynamics.shock_response(solution, path) is expected


def test_no_shock_leaves_price_unchanged():
    prefs = _prefs(2.0)
    for kind in ShockKind:
        assert dynamics.classify_price_response(0.0, prefs, GROWTH, kind) is PriceResponse.UNCHANGED
    path = GammaPath.constant(2.0)
    solution = dynamics.solve_c_path(path, prefs, GROWTH, horizon=4)
    assert dynamics.shock_response(solution, path) is PriceResponse.UNCHANGED


def test_price_path_with_unit_dividends():
    prefs = _prefs(0.5)
    solution = dynamics.solve_c_path(GammaPath.constant(2.0), prefs, GROWTH, horizon=4)
    prices = dynamics.price_path(solution, np.ones(5))
    np.testing.assert_allclose(prices, pricing_core.price_dividend_ratio(prefs, GROWTH), rtol=1e-15)
    with pytest.raises(LengthMismatch):
        dynamics.price_path(solution, np.ones(4))


def test_returns_path_uses_adjacent_ratios():
    path = GammaPath.permanent_step(2.0, 0.5, shock_time=1)
    solution = dynamics.solve_c_path(path, _prefs(0.5), GROWTH, horizon=3)
    y = np.array([1.01, 0.99, 1.03])
    returns = dynamics.returns_path(solution, y)
    c = solution.c_series
    assert returns[0] == pytest.approx((1.0 + c[1]) / c[0] * 1.01, rel=1e-15)
    assert returns[2] == pytest.approx((1.0 + c[3]) / c[2] * 1.03, rel=1e-15)
    with pytest.raises(LengthMismatch):
        dynamics.returns_path(solution, np.ones(4))


def test_prices_and_returns_are_consistent():
    path = GammaPath.permanent_step(2.0, 0.5, shock_time=1)
    solution = dynamics.solve_c_path(path, _prefs(0.5), GROWTH, horizon=3)
    y = np.array([1.02, 0.97, 1.01])
    q = dynamics.dividend_path(1.0, y)
    np.testing.assert_allclose(q, [1.0, 1.02, 1.02 * 0.97, 1.02 * 0.97 * 1.01], rtol=1e-15)
    p = dynamics.price_path(solution, q)
    returns = dynamics.returns_path(solution, y)
    np.testing.assert_allclose(returns, (p[1:] + q[1:]) / p[:-1], rtol=1e-12)


def _static_c(prefs: Preferences, gamma: float) -> float:
    return pricing_core.price_dividend_ratio(prefs.with_gamma(gamma), GROWTH)


@pytest.mark.parametrize("rho", [0.5, 2.0])
def test_transitory_pulse_returns_to_pre_shock_ratio(rho):
    prefs = _prefs(rho)
    path = GammaPath.transitory_pulse(2.0, 1.0, shock_time=3)
    solution = dynamics.solve_c_path(path, prefs, GROWTH, horizon=6)
    for t in range(4, 7):
        assert solution.c_series[t] == pytest.approx(_static_c(prefs, 2.0), rel=1e-12)


@pytest.mark.parametrize("rho,direction", [(0.5, -1.0), (2.0, 1.0)])
def test_ratio_moves_monotonically_before_announced_shock(rho, direction):
    prefs = _prefs(rho)
    path = GammaPath.permanent_step(2.0, 0.5, shock_time=5)
    solution = dynamics.solve_c_path(path, prefs, GROWTH, horizon=8)
    c = solution.c
    assert np.all(direction * np.diff(c[:6]) > 0.0)

    # the gap to the base ratio shrinks by h_base each period back from the shock
    c_base = _static_c(prefs, 2.0)
    h_base = pricing_core.h_value(prefs, GROWTH)
    for t in range(5):
        assert c[t] - c_base == pytest.approx(h_base ** (5 - t) * (c[5] - c_base), rel=1e-8)


@pytest.mark.parametrize("rho", [0.25, 0.5, 2.0, 4.0])
@pytest.mark.parametrize("shock_delta", [-0.5, 0.5, 1.0])
def test_permanent_step_scales_h(rho, shock_delta):
    path = GammaPath.permanent_step(2.0, shock_delta, shock_time=3)
    h = dynamics.h_path(path, _prefs(rho), GROWTH, horizon=6)
    ratio = math.exp(-shock_delta * (1.0 - rho) * GROWTH.sigma2 / 2.0)
    np.testing.assert_allclose(h[3:] / h[0], ratio, rtol=1e-12)
    assert np.all(h[:3] == h[0])


def test_permanent_step_h_ratio_standard_calibration():
    h = dynamics.h_path(GammaPath.permanent_step(2.0, 0.5), _prefs(0.5), GROWTH, horizon=2)
    assert h[1] / h[0] == pytest.approx(math.exp(-0.0001625), rel=1e-12)


def test_transitory_pulse_h_deviates_once():
    path = GammaPath.transitory_pulse(2.0, 0.5, shock_time=2)
    h = dynamics.h_path(path, _prefs(0.5), GROWTH, horizon=6)
    deviating = np.flatnonzero(h != h[0])
    assert deviating.tolist() == [2]
    assert h[2] / h[0] == pytest.approx(math.exp(-0.5 * 0.5 * GROWTH.sigma2 / 2.0), rel=1e-12)


@pytest.mark.parametrize("kind", ["permanent", "transitory"])
@pytest.mark.parametrize("rho,falls", [(0.5, True), (2.0, False)])
def test_unannounced_shock_moves_return_at_shock_date(kind, rho, falls):
    prefs = _prefs(rho)
    if kind == "permanent":
        path = GammaPath.permanent_step(2.0, 0.5, shock_time=3)
    else:
        path = GammaPath.transitory_pulse(2.0, 0.5, shock_time=3)
    solution = dynamics.solve_unanticipated_c_path(path, prefs, GROWTH, horizon=6)
    y = np.array([1.02, 0.99, 1.01, 1.03, 0.98, 1.0])
    returns = dynamics.returns_path(solution, y)

    c_base = _static_c(prefs, 2.0)
    benchmark = (1.0 + c_base) / c_base * y
    np.testing.assert_allclose(returns[:2], benchmark[:2], rtol=1e-12)
    assert (returns[2] < benchmark[2]) is falls
    assert (returns[2] > benchmark[2]) is not falls
    np.testing.assert_allclose(solution.c[3:], dynamics.solve_c_path(path, prefs, GROWTH, 6).c[3:], rtol=0)


def test_announced_shock_leaves_return_at_shock_date_on_benchmark():
    prefs = _prefs(0.5)
    path = GammaPath.permanent_step(2.0, 0.5, shock_time=3)
    solution = dynamics.solve_c_path(path, prefs, GROWTH, horizon=6)
    y = np.full(6, 1.02)
    returns = dynamics.returns_path(solution, y)
    h = np.asarray(solution.h_series)
    # with perfect foresight R_{t+1} = y_{t+1} / h_t in every period
    np.testing.assert_allclose(returns, y / h[:-1], rtol=1e-12)


def test_unannounced_shock_needs_a_shock_date():
    prefs = _prefs(0.5)
    with pytest.raises(ValueError, match="shock date"):
        dynamics.solve_unanticipated_c_path(GammaPath.custom([2.0, 3.0], 3.0), prefs, GROWTH, 4)
    with pytest.raises(ValueError, match="horizon"):
        dynamics.solve_unanticipated_c_path(GammaPath.permanent_step(2.0, 0.5, shock_time=3),
                                            prefs, GROWTH, 2)


def _grid_path(kind: GammaPathKind, base: float, shock_delta: float) -> GammaPath:
    if kind is GammaPathKind.PERMANENT_STEP:
        return GammaPath.permanent_step(base, shock_delta, shock_time=2)
    if kind is GammaPathKind.TRANSITORY_PULSE:
        return GammaPath.transitory_pulse(base, shock_delta, shock_time=2)
    return GammaPath.custom([base, base + shock_delta, base + shock_delta / 2.0],
                            terminal_gamma=base + shock_delta)


@pytest.mark.parametrize("kind", [
    GammaPathKind.PERMANENT_STEP, GammaPathKind.TRANSITORY_PULSE, GammaPathKind.CUSTOM,
])
def test_forward_series_matches_recursion_over_grid(kind, pricing_grid):
    checked = 0
    for prefs, growth in pricing_grid:
        for shock_delta in (-0.5, 0.5, 2.0):
            if prefs.gamma + shock_delta / 2.0 <= 0.0 or prefs.gamma + shock_delta <= 0.0:
                continue
            path = _grid_path(kind, prefs.gamma, shock_delta)
            if pricing_core.log_h(prefs, growth, gamma=path.gamma_infinity) >= -1e-4:
                continue
            horizon = path.settle_time + 2
            solution = dynamics.solve_c_path(path, prefs, growth, horizon)
            for t in range(horizon + 1):
                oracle = dynamics.forward_series_oracle(path, prefs, growth, t, truncation_tol=1e-12)
                assert oracle == pytest.approx(solution.c_series[t], rel=1e-10), (prefs, growth, t)
            checked += 1
    assert checked >= 50
