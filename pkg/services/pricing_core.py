"""
Pricing Core

Closed-form equilibrium of the Lucas-tree economy with recursive
preferences and i.i.d. lognormal dividend growth. All rates are per-period
natural-log rates; the price function is homogeneous, p_t = c q_t.
"""

import math
from typing import NamedTuple, Optional

from core.errors import NoEquilibrium
from schemas.economy import Equilibrium, GrowthProcess, Preferences


class ExpectedReturns(NamedTuple):
    e_ln_r: float
    ln_e_r: float


def log_h(prefs: Preferences, growth: GrowthProcess, gamma: Optional[float] = None) -> float:
    gamma = prefs.gamma if gamma is None else gamma
    return (
        -prefs.delta
        + (1.0 - prefs.rho) * growth.mu
        + 0.5 * (1.0 - prefs.rho) * (1.0 - gamma) * growth.sigma2
    )


def h_value(prefs: Preferences, growth: GrowthProcess) -> float:
    """h = exp[-delta + (1-rho) mu + (1-rho)(1-gamma) sigma2 / 2], the fixed point c / (1 + c)."""
    return math.exp(log_h(prefs, growth))


def ratio_from_log_h(ln_h: float, context: str = "") -> float:
    """Positive root of c / (1 + c) = h, or NoEquilibrium when h >= 1."""
    if ln_h >= 0.0:
        raise NoEquilibrium(math.exp(ln_h), context)
    # h / (1 - h) with the denominator taken as -expm1 to keep precision near h = 1
    return math.exp(ln_h) / -math.expm1(ln_h)


def price_dividend_ratio(prefs: Preferences, growth: GrowthProcess) -> float:
    return ratio_from_log_h(log_h(prefs, growth))


def risk_free_rate(prefs: Preferences, growth: GrowthProcess) -> float:
    """ln R_F = delta + rho (mu + sigma2/2) - gamma (1 + rho) sigma2 / 2."""
    return (
        prefs.delta
        + prefs.rho * (growth.mu + 0.5 * growth.sigma2)
        - 0.5 * prefs.gamma * (1.0 + prefs.rho) * growth.sigma2
    )


def equity_premium(prefs: Preferences, growth: GrowthProcess) -> float:
    return prefs.gamma * growth.sigma2


def expected_returns(prefs: Preferences, growth: GrowthProcess) -> ExpectedReturns:
    # ln R = ln((1 + c) / c) + ln y, so V(ln R) = sigma2
    e_ln_r = (
        prefs.delta
        + prefs.rho * growth.mu
        - 0.5 * (1.0 - prefs.rho) * (1.0 - prefs.gamma) * growth.sigma2
    )
    return ExpectedReturns(e_ln_r=e_ln_r, ln_e_r=e_ln_r + 0.5 * growth.sigma2)


def price(prefs: Preferences, growth: GrowthProcess, q: float) -> float:
    if q <= 0.0:
        raise ValueError("dividend level q must be positive")
    return price_dividend_ratio(prefs, growth) * q


def price_from_expected_return(prefs: Preferences, growth: GrowthProcess, q: float) -> float:
    """Price written through the expected equity return.

    The discount term is exp[ln E(y) - ln E(R)] with ln E(y) = mu + sigma2/2;
    it coincides with h, so this must agree with `price`.
    """
    if q <= 0.0:
        raise ValueError("dividend level q must be positive")
    exponent = growth.ln_expected_growth - expected_returns(prefs, growth).ln_e_r
    if exponent >= 0.0:
        raise NoEquilibrium(math.exp(exponent), "expected-return form")
    return math.exp(exponent) * q / -math.expm1(exponent)


def consumption_wealth_ratio(prefs: Preferences, growth: GrowthProcess) -> float:
    """a = c_t / w_t with w_t = p_t + q_t and c_t = q_t."""
    return 1.0 / (1.0 + price_dividend_ratio(prefs, growth))


def solve_equilibrium(prefs: Preferences, growth: GrowthProcess) -> Equilibrium:
    ln_h = log_h(prefs, growth)
    c = ratio_from_log_h(ln_h)
    returns = expected_returns(prefs, growth)
    ln_rf = risk_free_rate(prefs, growth)
    return Equilibrium(
        h=math.exp(ln_h),
        c=c,
        ln_rf=ln_rf,
        e_ln_r=returns.e_ln_r,
        ln_e_r=returns.ln_e_r,
        premium=equity_premium(prefs, growth),
        a=1.0 / (1.0 + c),
    )
