"""
Command Handlers Module

One handler per CLI subcommand. Each handler turns a validated Scenario
into a Report; the command service routes to them and renders the result.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple

import numpy as np
from pydantic import ValidationError

from core.config.logging_config import get_logger
from core.config.settings import settings
from core.errors import (
    BracketingFailure,
    NoEquilibrium,
    ScenarioValidationError,
    VerificationFailure,
)
from data_types import EulerEquation, GammaPathKind, PriceResponse, PricingModel
from schemas.economy import GrowthProcess, Preferences
from schemas.report import CommandResult, Report
from schemas.scenario import Scenario
from services import comparative_statics, dynamics, pricing_core, simulation
from services.verification import run_verification

logger = get_logger(__name__)

QUANTITY_COLUMNS = ("quantity", "value")
DYNAMICS_COLUMNS = ("period", "series", "value")
SIMULATE_COLUMNS = ("check", "estimate", "target", "std_error", "z_score")
VERIFY_COLUMNS = ("check", "rho", "gamma", "period", "statistic", "threshold", "passed")
SWEEP_COLUMNS = ("parameter", "parameter_value", "series", "value")


class BaseCommandHandler:
    """Base class for command handlers"""

    def __init__(self, name: str):
        self.name = name
        self.logger = get_logger(f"{__name__}.{name}")

    def handle(self, scenario: Scenario) -> CommandResult:
        raise NotImplementedError


class EquilibriumCommandHandler(BaseCommandHandler):
    """Closed-form equilibrium of the stationary economy"""

    def __init__(self):
        super().__init__("EquilibriumCommandHandler")

    def handle(self, scenario: Scenario) -> CommandResult:
        prefs, growth = scenario.preferences, scenario.growth
        equilibrium = pricing_core.solve_equilibrium(prefs, growth)
        rows = [(name, value) for name, value in equilibrium.model_dump().items()]
        rows.append(("price_q1", pricing_core.price(prefs, growth, 1.0)))
        rows.append(("price_q1_expected_return_form",
                     pricing_core.price_from_expected_return(prefs, growth, 1.0)))
        self.logger.info(f"✅ Equilibrium solved: c = {equilibrium.c!r}")
        return CommandResult(report=Report(
            title="Equilibrium",
            columns=QUANTITY_COLUMNS,
            rows=rows,
            notes=[f"beta = {prefs.beta!r}, eis = {prefs.eis!r}"],
        ))


class StaticsCommandHandler(BaseCommandHandler):
    """Risk-aversion derivatives and the sign of the price response"""

    def __init__(self):
        super().__init__("StaticsCommandHandler")

    def handle(self, scenario: Scenario) -> CommandResult:
        prefs, growth = scenario.preferences, scenario.growth
        report = comparative_statics.decompose_dlnER(prefs, growth)
        rows = [
            ("d_ln_er_d_gamma", report.d_ln_er_d_gamma),
            ("d_ln_rf_d_gamma", report.d_ln_rf_d_gamma),
            ("d_premium_d_gamma", report.d_premium_d_gamma),
            ("price_response_sign", report.price_response_sign),
        ]
        notes = []
        if prefs.is_expected_utility:
            ccapm = comparative_statics.decompose_dlnER(prefs, growth, model=PricingModel.CCAPM)
            rows += [
                ("ccapm_d_ln_er_d_gamma", ccapm.d_ln_er_d_gamma),
                ("ccapm_d_ln_rf_d_gamma", ccapm.d_ln_rf_d_gamma),
                ("ccapm_price_response_sign", ccapm.price_response_sign),
            ]
            crossing = comparative_statics.ccapm_sign_change_gamma(growth)
            if crossing is not None:
                rows.append(("ccapm_sign_change_gamma", crossing))

        if report.price_response_sign is PriceResponse.RISES:
            message = (
                f"rho = {prefs.rho!r} > 1: higher risk aversion raises the price "
                f"(counterintuitive regime, EIS below one)"
            )
            self.logger.warning(f"⚠️ {message}")
            notes.append(message)

        return CommandResult(report=Report(
            title="Comparative statics in gamma",
            columns=QUANTITY_COLUMNS,
            rows=rows,
            notes=notes,
        ))


class DynamicsCommandHandler(BaseCommandHandler):
    """Price-dividend ratios, prices and returns along a gamma path"""

    def __init__(self):
        super().__init__("DynamicsCommandHandler")

    def handle(self, scenario: Scenario) -> CommandResult:
        path = scenario.gamma_path
        if path is None:
            raise ScenarioValidationError("the dynamics command needs a [shock] section")
        prefs, growth = scenario.preferences, scenario.growth

        config = scenario.simulation_or_default
        horizon = max(config.horizon, path.settle_time)
        if horizon != config.horizon:
            config = config.model_copy(update={"horizon": horizon})

        solution = dynamics.solve_c_path(path, prefs, growth, horizon)
        growth_draws = simulation.simulate_growth_path(growth, config)
        dividends = dynamics.dividend_path(1.0, growth_draws)
        prices = dynamics.price_path(solution, dividends)
        returns = dynamics.returns_path(solution, growth_draws)

        rows: List[Tuple] = []
        for t in range(horizon + 1):
            rows += [
                (t, "gamma", solution.gamma_series[t]),
                (t, "h", solution.h_series[t]),
                (t, "c", solution.c_series[t]),
                (t, "ln_rf", solution.ln_rf_series[t]),
                (t, "premium", solution.premium_series[t]),
                (t, "dividend", float(dividends[t])),
                (t, "price", float(prices[t])),
            ]
            if t >= 1:
                rows.append((t, "gross_return", float(returns[t - 1])))

        notes = []
        shocked = path.kind in (GammaPathKind.PERMANENT_STEP, GammaPathKind.TRANSITORY_PULSE)
        if shocked and 1 <= path.shock_time <= horizon:
            response = dynamics.shock_response(solution, path)
            notes.append(f"price response at period {path.shock_time}: {response.value}")
            self.logger.info(f"📈 Shock at period {path.shock_time}: price {response.value}")

        return CommandResult(report=Report(
            title=f"Dynamics ({path.kind.value} gamma path)",
            columns=DYNAMICS_COLUMNS,
            rows=rows,
            notes=notes,
        ))


class SimulateCommandHandler(BaseCommandHandler):
    """Monte Carlo estimates next to their closed-form targets"""

    def __init__(self):
        super().__init__("SimulateCommandHandler")

    def handle(self, scenario: Scenario) -> CommandResult:
        prefs, growth = scenario.preferences, scenario.growth
        config = scenario.simulation_or_default
        c = pricing_core.price_dividend_ratio(prefs, growth)
        log_streams = None if growth.is_deterministic else simulation.log_growth_streams(growth, config)

        rows: List[Tuple] = []
        for equation in (EulerEquation.RISKY_STATIC, EulerEquation.RISKLESS_STATIC):
            report = simulation.euler_residual_static(
                prefs, growth, c, equation, config, log_streams=log_streams
            )
            rows.append((f"euler_{equation.value}", report.residual_mean, 1.0,
                         report.std_error, report.z_score))

        moments = simulation.estimate_return_moments(prefs, growth, config)
        closed = pricing_core.solve_equilibrium(prefs, growth)
        for check, estimate, target, std_error in (
            ("e_ln_r", moments.e_ln_r, closed.e_ln_r, moments.se_e_ln_r),
            ("ln_e_r", moments.ln_e_r, closed.ln_e_r, moments.se_ln_e_r),
            ("premium", moments.premium, closed.premium, moments.se_ln_e_r),
            ("var_ln_r", moments.var_ln_r, growth.sigma2, moments.se_var_ln_r),
        ):
            rows.append((check, estimate, target, std_error,
                         simulation.z_score(estimate, std_error, target)))

        try:
            c_star = simulation.euler_fixed_point_oracle(prefs, growth, config)
            rows.append(("c_fixed_point", c_star, c, None, None))
        except BracketingFailure as e:
            self.logger.warning(f"⚠️ Fixed-point oracle skipped: {e}")

        path = scenario.gamma_path
        if path is not None:
            horizon = max(config.horizon, path.settle_time + 1)
            solution = dynamics.solve_c_path(path, prefs, growth, horizon)
            for t in range(horizon):
                for equation in (EulerEquation.RISKY_DYNAMIC, EulerEquation.RISKLESS_DYNAMIC):
                    report = simulation.euler_residual_dynamic(
                        prefs, path, growth, solution, t, equation, config,
                        log_streams=log_streams,
                    )
                    rows.append((f"euler_{equation.value}_t{t}", report.residual_mean, 1.0,
                                 report.std_error, report.z_score))

        return CommandResult(report=Report(
            title=f"Monte Carlo ({config.n_draws} draws, seed {config.seed})",
            columns=SIMULATE_COLUMNS,
            rows=rows,
        ))


class VerifyCommandHandler(BaseCommandHandler):
    """Every closed form against its oracle; exit code 4 on any failure"""

    def __init__(self):
        super().__init__("VerifyCommandHandler")

    def handle(self, scenario: Scenario) -> CommandResult:
        verification = run_verification(scenario)
        rows = [
            (record.check, record.rho, record.gamma, record.period,
             record.statistic, record.threshold, record.passed)
            for record in verification.records
        ]
        failures = verification.failures
        for record in failures:
            self.logger.error(
                f"❌ {record.check} failed at rho={record.rho!r}, gamma={record.gamma!r}, "
                f"period={record.period}: {record.statistic!r} vs {record.threshold!r}"
            )
        summary = f"{len(rows) - len(failures)}/{len(rows)} checks passed"
        notes = [summary]
        informational = verification.informational
        if informational:
            names = sorted({record.check for record in informational})
            notes.append(
                f"{len(informational)} low-power checks reported without gating: {', '.join(names)}"
            )
        return CommandResult(
            report=Report(title="Verification", columns=VERIFY_COLUMNS, rows=rows, notes=notes),
            exit_code=0 if verification.passed else VerificationFailure.exit_code,
        )


def _sweep_point(scenario: Scenario, value: float) -> List[Tuple]:
    axis = scenario.sweep
    parameter = axis.parameter
    try:
        if settings.SWEEP_PARAMETERS[parameter] == 'preferences':
            prefs = Preferences(**{**scenario.preferences.model_dump(), parameter: value})
            growth = scenario.growth
        else:
            prefs = scenario.preferences
            growth = GrowthProcess(**{**scenario.growth.model_dump(), parameter: value})
    except ValidationError as e:
        reason = e.errors()[0]["msg"].removeprefix("Value error, ")
        return [(parameter, value, "status", f"invalid: {reason}")]

    try:
        equilibrium = pricing_core.solve_equilibrium(prefs, growth)
    except NoEquilibrium as e:
        logger.warning(f"⚠️ Sweep point {parameter}={value!r} has no equilibrium (h = {e.h!r})")
        return [(parameter, value, "status", "no_equilibrium")]

    derivative = comparative_statics.dlnER_dgamma_ez(prefs, growth)
    rows = [(parameter, value, name, quantity) for name, quantity in equilibrium.model_dump().items()]
    rows.append((parameter, value, "d_ln_er_d_gamma", derivative))
    rows.append((parameter, value, "price_response_sign", comparative_statics.classify_sign(derivative)))
    return rows


class SweepCommandHandler(BaseCommandHandler):
    """Equilibrium quantities over a one-dimensional parameter grid"""

    def __init__(self):
        super().__init__("SweepCommandHandler")

    def handle(self, scenario: Scenario) -> CommandResult:
        axis = scenario.sweep
        if axis is None:
            raise ScenarioValidationError("the sweep command needs a [sweep] section")
        grid = [float(value) for value in np.linspace(axis.start, axis.stop, axis.count)]
        self.logger.info(f"🔁 Sweeping {axis.parameter} over {len(grid)} points")

        # map keeps grid order regardless of completion order
        with ThreadPoolExecutor(max_workers=settings.MAX_WORKERS) as pool:
            blocks = list(pool.map(lambda value: _sweep_point(scenario, value), grid))

        rows = [row for block in blocks for row in block]
        skipped = sum(1 for block in blocks if block[0][2] == "status")
        notes = [f"{skipped} of {len(grid)} points have no valid equilibrium"] if skipped else []
        return CommandResult(report=Report(
            title=f"Sweep over {axis.parameter}",
            columns=SWEEP_COLUMNS,
            rows=rows,
            notes=notes,
        ))
