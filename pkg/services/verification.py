"""
Verification Service

Runs every closed form against its independent oracle: Monte Carlo Euler
residuals at the analytic price-dividend ratio, a power check at a mispriced
ratio, finite-difference derivatives, the channel decomposition and, when a
gamma path is given, the time-varying Euler residuals period by period.
"""

from typing import List, Optional, Tuple

from core.config.logging_config import get_logger
from core.config.settings import settings
from core.errors import NoEquilibrium
from data_types import DerivativeMode, DerivativeTarget, EulerEquation
from schemas.economy import GrowthProcess, Preferences
from schemas.scenario import Scenario
from schemas.simulation import SimulationConfig
from schemas.verification import VerificationRecord, VerificationReport
from services import comparative_statics, dynamics, pricing_core, simulation

logger = get_logger(__name__)


class VerificationService:
    """Collects verification records for a scenario"""

    def __init__(self, config: SimulationConfig):
        self.config = config
        self.records: List[VerificationRecord] = []

    def _record(self, check: str, prefs: Preferences, statistic: float,
                threshold: float, passed: bool, period: Optional[int] = None,
                gated: bool = True) -> None:
        self.records.append(VerificationRecord(
            check=check,
            rho=prefs.rho,
            gamma=prefs.gamma,
            period=period,
            statistic=statistic,
            threshold=threshold,
            passed=passed,
            gated=gated,
        ))

    def _record_power(self, check: str, prefs: Preferences, growth: GrowthProcess, c: float,
                      mispriced_c: float, z: float, period: Optional[int] = None) -> None:
        """A rejection check that can fail the run only when n_draws gives it enough power."""
        expected = simulation.expected_power_z(prefs, growth, c, mispriced_c, self.config.n_draws)
        gated = expected >= settings.POWER_GATE_Z
        if not gated:
            logger.info(
                f"ℹ️ {check} at rho={prefs.rho!r}, gamma={prefs.gamma!r} is informational: "
                f"expected |z| {expected:.2f} with {self.config.n_draws} draws"
            )
        self._record(check, prefs, z, settings.POWER_Z, abs(z) > settings.POWER_Z,
                     period=period, gated=gated)

    def grid(self, anchor: Preferences, growth: GrowthProcess) -> List[Preferences]:
        """The anchor plus the configured (rho, gamma) variations that have an equilibrium."""
        pairs: List[Tuple[float, float]] = [(anchor.rho, anchor.gamma)]
        pairs += [pair for pair in settings.VERIFY_GRID if pair not in pairs]
        points = []
        for rho, gamma in pairs:
            prefs = Preferences(delta=anchor.delta, rho=rho, gamma=gamma)
            if pricing_core.log_h(prefs, growth) >= 0.0:
                logger.warning(f"⚠️ Skipping rho={rho}, gamma={gamma}: no equilibrium")
                continue
            points.append(prefs)
        return points

    def check_static_point(self, prefs: Preferences, growth: GrowthProcess) -> None:
        c = pricing_core.price_dividend_ratio(prefs, growth)
        gate = self.config.z_threshold
        log_streams = None if growth.is_deterministic else simulation.log_growth_streams(growth, self.config)

        for equation in (EulerEquation.RISKY_STATIC, EulerEquation.RISKLESS_STATIC):
            report = simulation.euler_residual_static(
                prefs, growth, c, equation, self.config, log_streams=log_streams
            )
            self._record(f"euler_{equation.value}", prefs, report.z_score, gate,
                         abs(report.z_score) < gate)

        # the risky-asset condition carries no information on c when gamma = 1
        if growth.sigma2 > 0.0 and prefs.theta != 0.0:
            mispriced = c * (1.0 + settings.POWER_MISPRICING)
            report = simulation.euler_residual_static(
                prefs, growth, mispriced, EulerEquation.RISKY_STATIC, self.config,
                log_streams=log_streams,
            )
            self._record_power("power_10a", prefs, growth, c, mispriced, report.z_score)

        fd_step = self.config.fd_step
        if prefs.gamma - fd_step <= 0.0:
            logger.warning(f"⚠️ Skipping fd_gamma at gamma={prefs.gamma!r}: step {fd_step!r} crosses zero")
        else:
            fd_gamma = simulation.finite_difference_derivative(
                prefs, growth, DerivativeTarget.LN_ER, DerivativeMode.GAMMA_ONLY, fd_step
            )
            gap = abs(fd_gamma - comparative_statics.dlnER_dgamma_ez(prefs, growth))
            self._record("fd_gamma", prefs, gap, settings.FD_TOL, gap <= settings.FD_TOL)

        decomposition = comparative_statics.decompose_dlnER(prefs, growth)
        closure = abs(
            decomposition.d_ln_rf_d_gamma + decomposition.d_premium_d_gamma
            - decomposition.d_ln_er_d_gamma
        )
        self._record("decomposition", prefs, closure, settings.IDENTITY_TOL,
                     closure <= settings.IDENTITY_TOL)

    def check_diagonal(self, delta: float, rho: float, growth: GrowthProcess) -> None:
        """Expected-utility derivative at gamma == rho."""
        prefs = Preferences(delta=delta, rho=rho, gamma=rho)
        fd_step = self.config.fd_step
        if abs(rho - 1.0) <= fd_step or pricing_core.log_h(prefs, growth) >= 0.0:
            return
        fd_diagonal = simulation.finite_difference_derivative(
            prefs, growth, DerivativeTarget.LN_ER, DerivativeMode.GAMMA_RHO_DIAGONAL, fd_step
        )
        gap = abs(fd_diagonal - comparative_statics.dlnER_dgamma_ccapm(prefs, growth))
        self._record("fd_diagonal", prefs, gap, settings.FD_TOL, gap <= settings.FD_TOL)

    def check_dynamic_path(self, scenario: Scenario) -> None:
        path = scenario.gamma_path
        prefs, growth = scenario.preferences, scenario.growth
        horizon = max(self.config.horizon, path.settle_time + 1)
        solution = dynamics.solve_c_path(path, prefs, growth, horizon)
        gate = self.config.z_threshold
        log_streams = None if growth.is_deterministic else simulation.log_growth_streams(growth, self.config)

        for t in range(horizon):
            prefs_t = prefs.with_gamma(path.gamma_at(t))
            for equation in (EulerEquation.RISKY_DYNAMIC, EulerEquation.RISKLESS_DYNAMIC):
                report = simulation.euler_residual_dynamic(
                    prefs, path, growth, solution, t, equation, self.config,
                    log_streams=log_streams,
                )
                self._record(f"euler_{equation.value}", prefs_t, report.z_score, gate,
                             abs(report.z_score) < gate, period=t)

        # keeping the pre-shock ratio after the shock must be rejected
        s = path.shock_time
        shifted = path.gamma_at(s) != path.gamma_at(s - 1) if s >= 1 else False
        if shifted and growth.sigma2 > 0.0 and s < horizon:
            prefs_s = prefs.with_gamma(path.gamma_at(s))
            if prefs_s.theta != 0.0 and pricing_core.log_h(prefs_s, growth) < 0.0:
                stale_c = pricing_core.price_dividend_ratio(prefs.with_gamma(path.base_gamma), growth)
                report = simulation.euler_residual_static(
                    prefs_s, growth, stale_c, EulerEquation.RISKY_STATIC, self.config,
                    log_streams=log_streams,
                )
                shocked_c = pricing_core.price_dividend_ratio(prefs_s, growth)
                self._record_power("power_20a", prefs_s, growth, shocked_c, stale_c,
                                   report.z_score, period=s)


def run_verification(scenario: Scenario) -> VerificationReport:
    config = scenario.simulation_or_default
    service = VerificationService(config)
    prefs, growth = scenario.preferences, scenario.growth

    points = service.grid(prefs, growth)
    if not points:
        raise NoEquilibrium(pricing_core.h_value(prefs, growth), "every verification grid point")
    for point in points:
        service.check_static_point(point, growth)
    for rho in sorted({point.rho for point in points}):
        service.check_diagonal(prefs.delta, rho, growth)
    if scenario.gamma_path is not None:
        service.check_dynamic_path(scenario)

    report = VerificationReport(records=service.records)
    logger.info(
        f"✅ Verification finished: {len(report.records) - len(report.failures)}"
        f"/{len(report.records)} checks passed"
    )
    return report
