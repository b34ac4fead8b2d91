"""
Monte Carlo Verification Harness

Simulates lognormal dividend growth and evaluates the equilibrium Euler
conditions, return moments and finite-difference derivatives against the
closed forms.

Reproducibility contract: the master seed is expanded with
numpy.random.SeedSequence into `stream_count` independent PCG64 substreams;
n_draws is split across them by a fixed partition, streams are evaluated on
a thread pool, and per-stream sums are combined with math.fsum, so results
are bit-identical for a given (seed, stream_count, n_draws) regardless of
scheduling.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from core.config.logging_config import get_logger
from core.config.settings import settings
from core.errors import (
    BracketingFailure,
    LengthMismatch,
    NumericalOverflow,
    StepCrossesSingularity,
)
from data_types import DerivativeMode, DerivativeTarget, EulerEquation
from schemas.dynamics import DynamicSolution, GammaPath
from schemas.economy import GrowthProcess, Preferences
from schemas.simulation import EulerReport, ReturnMoments, SimulationConfig
from services import pricing_core

logger = get_logger(__name__)

Streams = List[np.ndarray]


# ---------------------------------------------------------------------------
# Draws
# ---------------------------------------------------------------------------

def _map_streams(fn: Callable, items: Sequence) -> list:
    if len(items) == 1:
        return [fn(items[0])]
    with ThreadPoolExecutor(max_workers=settings.MAX_WORKERS) as pool:
        return list(pool.map(fn, items))


def stream_sizes(config: SimulationConfig) -> List[int]:
    base, extra = divmod(config.n_draws, config.stream_count)
    return [base + (1 if i < extra else 0) for i in range(config.stream_count)]


def _stream_generators(config: SimulationConfig) -> List[np.random.Generator]:
    children = np.random.SeedSequence(config.seed).spawn(config.stream_count)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def _standard_normals(rng: np.random.Generator, size: int, antithetic: bool) -> np.ndarray:
    if antithetic:
        half = rng.standard_normal(size // 2)
        return np.concatenate((half, -half))
    return rng.standard_normal(size)


def log_growth_streams(growth: GrowthProcess, config: SimulationConfig) -> Streams:
    """ln y draws, one array per substream, in stream order."""
    sigma = growth.sigma

    def draw(job: Tuple[np.random.Generator, int]) -> np.ndarray:
        rng, size = job
        return growth.mu + sigma * _standard_normals(rng, size, config.antithetic)

    return _map_streams(draw, list(zip(_stream_generators(config), stream_sizes(config))))


def simulate_growth(growth: GrowthProcess, config: SimulationConfig) -> np.ndarray:
    """n_draws i.i.d. gross growth rates y with ln y ~ N(mu, sigma2)."""
    if growth.is_deterministic:
        return np.full(config.n_draws, math.exp(growth.mu))
    return np.exp(np.concatenate(log_growth_streams(growth, config)))


def simulate_growth_path(growth: GrowthProcess, config: SimulationConfig) -> np.ndarray:
    """One path y_1 .. y_horizon, drawn from the stream after the Monte Carlo substreams."""
    seed_seq = np.random.SeedSequence(config.seed, spawn_key=(config.stream_count,))
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    return np.exp(growth.mu + growth.sigma * rng.standard_normal(config.horizon))


# ---------------------------------------------------------------------------
# Pooled statistics
# ---------------------------------------------------------------------------

def _pair_means(values: Streams, antithetic: bool) -> Streams:
    if not antithetic:
        return values
    out = []
    for v in values:
        half = v.size // 2
        out.append(0.5 * (v[:half] + v[half:]))
    return out


def pooled_mean(values: Streams) -> float:
    n = sum(v.size for v in values)
    return math.fsum(float(np.sum(v)) for v in values) / n


def pooled_mean_and_se(values: Streams, antithetic: bool = False) -> Tuple[float, float]:
    """Mean and standard error; antithetic pairs are averaged first so the units are i.i.d."""
    units = _pair_means(values, antithetic)
    n = sum(v.size for v in units)
    mean = pooled_mean(units)
    if n < 2:
        return mean, 0.0
    sum_sq = math.fsum(float(np.sum((v - mean) ** 2)) for v in units)
    return mean, math.sqrt(sum_sq / (n - 1) / n)


def pooled_variance(values: Streams) -> float:
    n = sum(v.size for v in values)
    mean = pooled_mean(values)
    return math.fsum(float(np.sum((v - mean) ** 2)) for v in values) / (n - 1)


def z_score(mean: float, std_error: float, target: float = 1.0) -> float:
    gap = mean - target
    # rounding-level spread, e.g. antithetic pairs of a linear statistic
    if std_error <= settings.IDENTITY_TOL and abs(gap) <= settings.IDENTITY_TOL:
        return 0.0
    if std_error > 0.0:
        return gap / std_error
    return math.copysign(math.inf, gap)


# ---------------------------------------------------------------------------
# Euler residuals
# ---------------------------------------------------------------------------

def _euler_exponent(
    log_y: np.ndarray,
    prefs: Preferences,
    ln_gross_factor: float,
    ln_rf: Optional[float],
) -> np.ndarray:
    """Log of the Euler integrand with R = exp(ln_gross_factor) y.

    Risky asset: theta (ln beta - rho ln y) + theta ln R
    Riskless bill: theta (ln beta - rho ln y) + (theta - 1) ln R + ln R_F
    """
    theta = prefs.theta
    ln_r = ln_gross_factor + log_y
    weighted_kernel = theta * (-prefs.delta - prefs.rho * log_y)
    if ln_rf is None:
        return weighted_kernel + theta * ln_r
    return weighted_kernel + (theta - 1.0) * ln_r + ln_rf


def _evaluate_integrand(exponents: Streams, equation: EulerEquation) -> Streams:
    values = []
    offset = 0
    for exponent in exponents:
        with np.errstate(over="ignore"):
            value = np.exp(exponent)
        bad = np.flatnonzero(~np.isfinite(value))
        if bad.size:
            raise NumericalOverflow(offset + int(bad[0]), equation.value)
        values.append(value)
        offset += exponent.size
    return values


def _euler_report(
    prefs: Preferences,
    growth: GrowthProcess,
    ln_gross_factor: float,
    ln_rf: Optional[float],
    equation: EulerEquation,
    config: SimulationConfig,
    period: Optional[int] = None,
    log_streams: Optional[Streams] = None,
) -> EulerReport:
    if growth.is_deterministic:
        # single deterministic outcome ln y = mu
        exponent = _euler_exponent(np.array([growth.mu]), prefs, ln_gross_factor, ln_rf)
        mean = float(_evaluate_integrand([exponent], equation)[0][0])
        std_error = 0.0
    else:
        if log_streams is None:
            log_streams = log_growth_streams(growth, config)
        exponents = _map_streams(
            lambda log_y: _euler_exponent(log_y, prefs, ln_gross_factor, ln_rf), log_streams
        )
        mean, std_error = pooled_mean_and_se(
            _evaluate_integrand(exponents, equation), config.antithetic
        )

    report = EulerReport(
        residual_mean=mean,
        std_error=std_error,
        z_score=z_score(mean, std_error),
        equation_id=equation,
        n_draws=config.n_draws,
        period=period,
    )
    logger.debug(
        f"Euler {equation.value} period={period}: mean={mean!r} se={std_error!r} z={report.z_score!r}"
    )
    return report


def euler_residual_static(
    prefs: Preferences,
    growth: GrowthProcess,
    c: float,
    which: Union[EulerEquation, str],
    config: SimulationConfig,
    log_streams: Optional[Streams] = None,
) -> EulerReport:
    """Euler condition of the stationary economy evaluated at price-dividend ratio c."""
    equation = EulerEquation(which)
    if equation not in (EulerEquation.RISKY_STATIC, EulerEquation.RISKLESS_STATIC):
        raise ValueError(f"{equation.value} is not a stationary-economy Euler equation")
    if c <= 0.0:
        raise ValueError("price-dividend ratio must be positive")
    ln_rf = pricing_core.risk_free_rate(prefs, growth) if equation.prices_riskless_bill else None
    return _euler_report(
        prefs, growth, math.log1p(1.0 / c), ln_rf, equation, config, log_streams=log_streams
    )


def euler_residual_dynamic(
    prefs: Preferences,
    path: GammaPath,
    growth: GrowthProcess,
    solution: DynamicSolution,
    t: int,
    which: Union[EulerEquation, str],
    config: SimulationConfig,
    log_streams: Optional[Streams] = None,
) -> EulerReport:
    """Time-t Euler condition with gamma_t and R_{t+1} = ((1 + c_{t+1}) / c_t) y_{t+1}."""
    equation = EulerEquation(which)
    if equation not in (EulerEquation.RISKY_DYNAMIC, EulerEquation.RISKLESS_DYNAMIC):
        raise ValueError(f"{equation.value} is not a time-varying Euler equation")
    if not 0 <= t < solution.horizon:
        raise LengthMismatch(f"period {t} needs c_t and c_t+1 inside the horizon 0..{solution.horizon}")

    prefs_t = prefs.with_gamma(path.gamma_at(t))
    c_now, c_next = solution.c_series[t], solution.c_series[t + 1]
    ln_gross_factor = math.log1p(c_next) - math.log(c_now)
    ln_rf = (
        pricing_core.risk_free_rate(prefs_t, growth) if equation.prices_riskless_bill else None
    )
    return _euler_report(
        prefs_t, growth, ln_gross_factor, ln_rf, equation, config,
        period=t, log_streams=log_streams,
    )


def expected_power_z(
    prefs: Preferences,
    growth: GrowthProcess,
    c: float,
    mispriced_c: float,
    n_draws: int,
) -> float:
    """Approximate |z| of the risky-asset residual at mispriced_c when c is the equilibrium ratio.

    Moving c shifts ln R by d = ln(1 + 1/c') - ln(1 + 1/c) on every draw while
    the log integrand has spread |1 - gamma| sigma, so |z| ~ |d| sqrt(n) / (|1 - rho| sigma).
    """
    if c <= 0.0 or mispriced_c <= 0.0:
        raise ValueError("price-dividend ratios must be positive")
    shift = abs(math.log1p(1.0 / mispriced_c) - math.log1p(1.0 / c))
    if growth.sigma2 == 0.0:
        return math.inf if shift > 0.0 else 0.0
    return shift * math.sqrt(n_draws) / (abs(1.0 - prefs.rho) * growth.sigma)


def euler_fixed_point_oracle(
    prefs: Preferences,
    growth: GrowthProcess,
    config: SimulationConfig,
    tol: float = settings.BISECTION_TOL,
) -> float:
    """c* at which the sample mean of the risky-asset Euler expression equals 1.

    Bisection on c with common random numbers: every candidate reuses the same
    draws, so the sample residual is a smooth monotone function of c.
    """
    if prefs.theta == 0.0:
        raise BracketingFailure("with gamma = 1 the risky-asset Euler expression is identically 1")

    if growth.is_deterministic:
        log_streams = [np.array([growth.mu])]
    else:
        log_streams = log_growth_streams(growth, config)
    theta = prefs.theta
    kernels = [theta * (-prefs.delta + (1.0 - prefs.rho) * log_y) for log_y in log_streams]

    def gap(c: float) -> float:
        shift = theta * math.log1p(1.0 / c)
        with np.errstate(over="ignore"):
            return pooled_mean([np.exp(kernel + shift) for kernel in kernels]) - 1.0

    lo, hi = settings.BRACKET
    gap_lo, gap_hi = gap(lo), gap(hi)
    if not gap_lo * gap_hi < 0.0:
        raise BracketingFailure(
            f"no sign change of the Euler residual on [{lo!r}, {hi!r}]: {gap_lo!r}, {gap_hi!r}"
        )
    c_star = optimize.bisect(gap, lo, hi, xtol=tol, maxiter=200)
    logger.debug(f"Fixed-point oracle: c* = {c_star!r}")
    return c_star


# ---------------------------------------------------------------------------
# Return moments
# ---------------------------------------------------------------------------

def estimate_return_moments(
    prefs: Preferences,
    growth: GrowthProcess,
    config: SimulationConfig,
) -> ReturnMoments:
    c = pricing_core.price_dividend_ratio(prefs, growth)
    ln_gross_factor = math.log1p(1.0 / c)
    ln_rf = pricing_core.risk_free_rate(prefs, growth)

    if growth.is_deterministic:
        e_ln_r = ln_gross_factor + growth.mu
        ln_e_r = e_ln_r
        return ReturnMoments(
            e_ln_r=e_ln_r, ln_e_r=ln_e_r, premium=ln_e_r - ln_rf, var_ln_r=0.0,
            se_e_ln_r=0.0, se_ln_e_r=0.0, se_var_ln_r=0.0, n_draws=config.n_draws,
        )

    ln_r = [ln_gross_factor + log_y for log_y in log_growth_streams(growth, config)]
    gross = [np.exp(v) for v in ln_r]

    e_ln_r, se_e_ln_r = pooled_mean_and_se(ln_r, config.antithetic)
    mean_r, se_mean_r = pooled_mean_and_se(gross, config.antithetic)
    var_ln_r = pooled_variance(ln_r)
    n = config.n_draws

    return ReturnMoments(
        e_ln_r=e_ln_r,
        ln_e_r=math.log(mean_r),
        premium=math.log(mean_r) - ln_rf,
        var_ln_r=var_ln_r,
        se_e_ln_r=se_e_ln_r,
        se_ln_e_r=se_mean_r / mean_r,
        se_var_ln_r=var_ln_r * math.sqrt(2.0 / (n - 1)),
        n_draws=n,
    )


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------

def _closed_form(prefs: Preferences, growth: GrowthProcess, target: DerivativeTarget) -> float:
    if target is DerivativeTarget.LN_ER:
        return pricing_core.expected_returns(prefs, growth).ln_e_r
    if target is DerivativeTarget.LN_RF:
        return pricing_core.risk_free_rate(prefs, growth)
    if target is DerivativeTarget.PREMIUM:
        return pricing_core.equity_premium(prefs, growth)
    return pricing_core.price_dividend_ratio(prefs, growth)


def finite_difference_derivative(
    prefs: Preferences,
    growth: GrowthProcess,
    target: Union[DerivativeTarget, str],
    wrt_mode: Union[DerivativeMode, str] = DerivativeMode.GAMMA_ONLY,
    step: float = settings.FD_STEP,
) -> float:
    """Central difference in gamma, or in gamma and rho together along the diagonal."""
    target = DerivativeTarget(target)
    wrt_mode = DerivativeMode(wrt_mode)
    if step <= 0.0:
        raise ValueError("step must be positive")
    if prefs.gamma - step <= 0.0:
        raise StepCrossesSingularity(f"gamma - step = {prefs.gamma - step!r} is not positive")

    rho_down, rho_up = prefs.rho, prefs.rho
    if wrt_mode is DerivativeMode.GAMMA_RHO_DIAGONAL:
        rho_down, rho_up = prefs.rho - step, prefs.rho + step
        if rho_down <= 0.0:
            raise StepCrossesSingularity(f"rho - step = {rho_down!r} is not positive")
        if rho_down <= 1.0 <= rho_up:
            raise StepCrossesSingularity(
                f"diagonal step brackets rho = 1: [{rho_down!r}, {rho_up!r}]"
            )

    up = Preferences(delta=prefs.delta, rho=rho_up, gamma=prefs.gamma + step)
    down = Preferences(delta=prefs.delta, rho=rho_down, gamma=prefs.gamma - step)
    return (_closed_form(up, growth, target) - _closed_form(down, growth, target)) / (2.0 * step)
