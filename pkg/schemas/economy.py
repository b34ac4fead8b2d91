import math

from pydantic import BaseModel, ConfigDict, Field, field_validator


class Preferences(BaseModel):
    """Recursive-utility preference parameters.

    delta is the per-period subjective discount rate (beta = exp(-delta)),
    rho the inverse elasticity of intertemporal substitution and gamma the
    coefficient of relative risk aversion.
    """

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    delta: float = Field(ge=0.0)
    rho: float
    gamma: float

    @field_validator("rho")
    @classmethod
    def rho_admissible(cls, value: float) -> float:
        if value <= 0.0 or value == 1.0:
            raise ValueError("rho must be positive and not equal to 1")
        return value

    @field_validator("gamma")
    @classmethod
    def gamma_positive(cls, value: float) -> float:
        if value <= 0.0:
            raise ValueError("gamma must be positive")
        return value

    @classmethod
    def from_beta(cls, beta: float, rho: float, gamma: float) -> "Preferences":
        if not 0.0 < beta <= 1.0:
            raise ValueError("beta must satisfy 0 < beta <= 1")
        return cls(delta=max(0.0, -math.log(beta)), rho=rho, gamma=gamma)

    @property
    def beta(self) -> float:
        return math.exp(-self.delta)

    @property
    def theta(self) -> float:
        """Euler exponent (1 - gamma) / (1 - rho)."""
        return (1.0 - self.gamma) / (1.0 - self.rho)

    @property
    def eis(self) -> float:
        return 1.0 / self.rho

    @property
    def is_expected_utility(self) -> bool:
        return self.gamma == self.rho

    def with_gamma(self, gamma: float) -> "Preferences":
        return Preferences(delta=self.delta, rho=self.rho, gamma=gamma)


class GrowthProcess(BaseModel):
    """i.i.d. lognormal dividend growth: ln y ~ N(mu, sigma2)."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    mu: float
    sigma2: float = Field(ge=0.0)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def ln_expected_growth(self) -> float:
        return self.mu + 0.5 * self.sigma2

    @property
    def is_deterministic(self) -> bool:
        return self.sigma2 == 0.0


class Equilibrium(BaseModel):
    """Closed-form equilibrium of the stationary-preference economy."""

    model_config = ConfigDict(frozen=True)

    h: float
    c: float = Field(gt=0.0)
    ln_rf: float
    e_ln_r: float
    ln_e_r: float
    premium: float
    a: float = Field(gt=0.0, lt=1.0)
