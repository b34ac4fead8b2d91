"""
Comparative Dynamics

Price-dividend ratios under a deterministic, eventually-constant path of
risk aversion. c_t obeys c_t = h_t (1 + c_{t+1}); it is solved by backward
recursion from the closed form at the terminal gamma, and independently by
summing the forward series of partial products of h.
"""

import math
from typing import Optional, Sequence

import numpy as np

from core.config.logging_config import get_logger
from core.config.settings import settings
from core.errors import LengthMismatch, NoEquilibrium
from data_types import GammaPathKind, PriceResponse, ShockKind
from schemas.dynamics import DynamicSolution, GammaPath
from schemas.economy import GrowthProcess, Preferences
from services import pricing_core
from services.comparative_statics import classify_sign

logger = get_logger(__name__)


def _log_h_series(gammas: np.ndarray, prefs: Preferences, growth: GrowthProcess) -> np.ndarray:
    return (
        -prefs.delta
        + (1.0 - prefs.rho) * growth.mu
        + 0.5 * (1.0 - prefs.rho) * (1.0 - gammas) * growth.sigma2
    )


def h_path(
    path: GammaPath,
    prefs: Preferences,
    growth: GrowthProcess,
    horizon: Optional[int] = None,
) -> np.ndarray:
    """h_0 .. h_horizon with gamma_t substituted; horizon defaults to the settle time."""
    horizon = path.settle_time if horizon is None else horizon
    return np.exp(_log_h_series(path.values(horizon), prefs, growth))


def _terminal_log_h(path: GammaPath, prefs: Preferences, growth: GrowthProcess) -> float:
    return pricing_core.log_h(prefs, growth, gamma=path.gamma_infinity)


def solve_c_path(
    path: GammaPath,
    prefs: Preferences,
    growth: GrowthProcess,
    horizon: int,
) -> DynamicSolution:
    if horizon < path.settle_time:
        raise ValueError(
            f"horizon {horizon} ends before gamma settles at period {path.settle_time}"
        )
    terminal_c = pricing_core.ratio_from_log_h(
        _terminal_log_h(path, prefs, growth), context="terminal gamma"
    )

    gammas = path.values(horizon)
    h = np.exp(_log_h_series(gammas, prefs, growth))

    c = np.empty(horizon + 1)
    c[path.settle_time:] = terminal_c
    for t in range(path.settle_time - 1, -1, -1):
        c[t] = h[t] * (1.0 + c[t + 1])

    # ln R_F and the premium with gamma_t in place of gamma
    ln_rf = (
        prefs.delta
        + prefs.rho * (growth.mu + 0.5 * growth.sigma2)
        - 0.5 * gammas * (1.0 + prefs.rho) * growth.sigma2
    )
    premium = gammas * growth.sigma2

    logger.debug(f"Solved c path over {horizon} periods, terminal c = {terminal_c!r}")
    return DynamicSolution(
        horizon=horizon,
        gamma_series=tuple(gammas.tolist()),
        h_series=tuple(h.tolist()),
        c_series=tuple(c.tolist()),
        ln_rf_series=tuple(ln_rf.tolist()),
        premium_series=tuple(premium.tolist()),
        terminal_c=terminal_c,
    )


def solve_unanticipated_c_path(
    path: GammaPath,
    prefs: Preferences,
    growth: GrowthProcess,
    horizon: int,
) -> DynamicSolution:
    """c path when the shock is news at its date rather than known from period 0.

    Before shock_time the economy is priced at the constant base gamma; from
    shock_time on the rest of the path is known, so c_t matches solve_c_path.
    The recursion c_t = h_t (1 + c_{t+1}) breaks once, across the shock date.
    """
    if path.kind not in (GammaPathKind.PERMANENT_STEP, GammaPathKind.TRANSITORY_PULSE):
        raise ValueError("only permanent and transitory shocks have a shock date")
    if horizon < path.shock_time:
        raise ValueError(f"horizon {horizon} ends before the shock at period {path.shock_time}")
    anticipated = solve_c_path(path, prefs, growth, max(horizon, path.settle_time))
    base_c = pricing_core.ratio_from_log_h(
        pricing_core.log_h(prefs, growth, gamma=path.base_gamma), context="base gamma"
    )
    s = path.shock_time
    c = (base_c,) * s + anticipated.c_series[s:horizon + 1]
    return anticipated.model_copy(update={
        "horizon": horizon,
        "gamma_series": anticipated.gamma_series[:horizon + 1],
        "h_series": anticipated.h_series[:horizon + 1],
        "c_series": c,
        "ln_rf_series": anticipated.ln_rf_series[:horizon + 1],
        "premium_series": anticipated.premium_series[:horizon + 1],
    })


def forward_series_oracle(
    path: GammaPath,
    prefs: Preferences,
    growth: GrowthProcess,
    t: int,
    truncation_tol: float = settings.TRUNCATION_TOL,
) -> float:
    """c_t = h_t + h_t h_{t+1} + h_t h_{t+1} h_{t+2} + ..., truncated.

    Partial products are accumulated up to the settle time; after that every
    factor is h_inf, and terms are added until the geometric bound on the
    remaining tail, P h_inf / (1 - h_inf), is at most truncation_tol. The
    tail itself is not added.
    """
    if truncation_tol <= 0.0:
        raise ValueError("truncation_tol must be positive")
    if t < 0:
        raise ValueError("period must be non-negative")
    ln_h_inf = _terminal_log_h(path, prefs, growth)
    if ln_h_inf >= 0.0:
        raise NoEquilibrium(math.exp(ln_h_inf), "terminal gamma")
    h_inf = math.exp(ln_h_inf)

    terms = []
    product = 1.0
    for j in range(t, max(t, path.settle_time)):
        product *= math.exp(pricing_core.log_h(prefs, growth, gamma=path.gamma_at(j)))
        terms.append(product)

    if product > 0.0:
        # P h_inf^n h_inf / (1 - h_inf) <= tol  <=>  h_inf^(n+1) / (1 - h_inf) <= tol / P
        n_constant = required_terms(h_inf, truncation_tol / product) - 1
        terms.extend((product * np.power(h_inf, np.arange(1, n_constant + 1))).tolist())

    logger.debug(f"Forward series at t={t}: {len(terms)} terms")
    return math.fsum(terms)


def required_terms(h_inf: float, truncation_tol: float) -> int:
    """Smallest n >= 1 with h_inf^n / (1 - h_inf) <= truncation_tol."""
    return max(1, math.ceil(math.log(truncation_tol * (1.0 - h_inf)) / math.log(h_inf)))


def classify_price_response(
    shock_delta: float,
    prefs: Preferences,
    growth: GrowthProcess,
    shock_kind: ShockKind,
) -> PriceResponse:
    """Sign of the price move at the shock date; the rule is the same for both shock kinds.

    h after the shock is h before times exp[-delta_gamma (1 - rho) sigma2 / 2], so
    the price falls exactly when delta_gamma (1 - rho) sigma2 > 0.
    """
    ShockKind(shock_kind)
    return classify_sign(shock_delta * (1.0 - prefs.rho) * growth.sigma2)


def shock_response(solution: DynamicSolution, path: GammaPath) -> PriceResponse:
    """Realized move of c across the shock date, c_s versus c_{s-1}."""
    s = path.shock_time
    if s < 1 or s > solution.horizon:
        raise LengthMismatch(f"shock date {s} is outside the solved horizon 0..{solution.horizon}")
    c_before, c_after = solution.c_series[s - 1], solution.c_series[s]
    relative_move = (c_before - c_after) / c_before
    return classify_sign(relative_move)


def price_path(solution: DynamicSolution, dividend_path: Sequence[float]) -> np.ndarray:
    q = np.asarray(dividend_path, dtype=float)
    if q.shape != (solution.horizon + 1,):
        raise LengthMismatch(
            f"dividend path has {q.size} values, expected horizon + 1 = {solution.horizon + 1}"
        )
    if np.any(q <= 0.0):
        raise ValueError("dividends must be positive")
    return solution.c * q


def returns_path(solution: DynamicSolution, growth_path: Sequence[float]) -> np.ndarray:
    """Gross returns R_1 .. R_horizon from growth draws y_1 .. y_horizon."""
    y = np.asarray(growth_path, dtype=float)
    if y.shape != (solution.horizon,):
        raise LengthMismatch(
            f"growth path has {y.size} values, expected horizon = {solution.horizon}"
        )
    c = solution.c
    return (1.0 + c[1:]) / c[:-1] * y


def dividend_path(q0: float, growth_path: Sequence[float]) -> np.ndarray:
    """Dividend levels q_0 .. q_n from q_0 and growth draws y_1 .. y_n."""
    if q0 <= 0.0:
        raise ValueError("initial dividend must be positive")
    y = np.asarray(growth_path, dtype=float)
    return q0 * np.concatenate(([1.0], np.cumprod(y)))
