"""
Comparative Statics

Analytic risk-aversion derivatives of expected returns and the sign of the
price response. The Epstein-Zin derivative holds rho fixed; the CCAPM
derivative moves gamma and rho together along gamma == rho.
"""

from typing import Optional

from core.config.settings import settings
from core.errors import ModelMismatch
from data_types import PriceResponse, PricingModel
from schemas.economy import GrowthProcess, Preferences
from schemas.statics import DerivativeReport


def classify_sign(value: float) -> PriceResponse:
    """Price moves opposite to ln E(R): a positive derivative means the price falls."""
    if abs(value) < settings.SIGN_TOLERANCE:
        return PriceResponse.UNCHANGED
    return PriceResponse.FALLS if value > 0.0 else PriceResponse.RISES


def _require_expected_utility(prefs: Preferences) -> None:
    if not prefs.is_expected_utility:
        raise ModelMismatch(
            f"the CCAPM derivative needs gamma == rho, got gamma={prefs.gamma!r}, rho={prefs.rho!r}"
        )


def dlnER_dgamma_ez(prefs: Preferences, growth: GrowthProcess) -> float:
    return 0.5 * growth.sigma2 * (1.0 - prefs.rho)


def dlnER_dgamma_ccapm(prefs: Preferences, growth: GrowthProcess) -> float:
    _require_expected_utility(prefs)
    return growth.mu + growth.sigma2 * (1.0 - prefs.gamma)


def ccapm_sign_change_gamma(growth: GrowthProcess) -> Optional[float]:
    """gamma at which the CCAPM derivative crosses zero, 1 + mu / sigma2."""
    if growth.sigma2 == 0.0:
        return None
    return 1.0 + growth.mu / growth.sigma2


def decompose_dlnER(
    prefs: Preferences,
    growth: GrowthProcess,
    model: PricingModel = PricingModel.EPSTEIN_ZIN,
) -> DerivativeReport:
    model = PricingModel(model)
    if model is PricingModel.CCAPM:
        _require_expected_utility(prefs)
        d_ln_rf = growth.mu - prefs.gamma * growth.sigma2
        d_premium = growth.sigma2
        total = dlnER_dgamma_ccapm(prefs, growth)
    else:
        d_ln_rf = -0.5 * (1.0 + prefs.rho) * growth.sigma2
        d_premium = growth.sigma2
        total = dlnER_dgamma_ez(prefs, growth)

    # channels must close on the total
    if abs((d_ln_rf + d_premium) - total) > settings.IDENTITY_TOL:
        raise ArithmeticError("rate and premium channels do not add up to the total derivative")

    return DerivativeReport(
        d_ln_er_d_gamma=total,
        d_ln_rf_d_gamma=d_ln_rf,
        d_premium_d_gamma=d_premium,
        price_response_sign=classify_sign(total),
        model=model,
    )
