from pydantic import BaseModel, ConfigDict

from data_types import PriceResponse, PricingModel


class DerivativeReport(BaseModel):
    """Risk-aversion derivative of ln E(R) split into rate and premium channels."""

    model_config = ConfigDict(frozen=True)

    d_ln_er_d_gamma: float
    d_ln_rf_d_gamma: float
    d_premium_d_gamma: float
    price_response_sign: PriceResponse
    model: PricingModel
