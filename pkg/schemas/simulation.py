from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.config.settings import settings
from data_types import EulerEquation


class SimulationConfig(BaseModel):
    """Monte Carlo plumbing: draw count, path length and seeding."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    n_draws: int = Field(default=settings.DEFAULT_N_DRAWS, ge=2)
    horizon: int = Field(default=settings.DEFAULT_HORIZON, ge=1)
    seed: int = Field(default=settings.DEFAULT_SEED, ge=0, le=2**64 - 1)
    stream_count: int = Field(default=settings.DEFAULT_STREAM_COUNT, ge=1)
    antithetic: bool = False
    fd_step: float = Field(default=settings.FD_STEP, gt=0.0)
    z_threshold: float = Field(default=settings.Z_GATE, gt=0.0)

    @model_validator(mode="after")
    def check_partition(self) -> "SimulationConfig":
        if self.stream_count > self.n_draws:
            raise ValueError("stream_count cannot exceed n_draws")
        if self.antithetic and self.n_draws % (2 * self.stream_count):
            raise ValueError("antithetic sampling needs n_draws divisible by 2 * stream_count")
        return self


class EulerReport(BaseModel):
    """Sample statistics of one Euler expression; its expectation is 1 in equilibrium."""

    model_config = ConfigDict(frozen=True)

    residual_mean: float
    std_error: float = Field(ge=0.0)
    z_score: float
    equation_id: EulerEquation
    n_draws: int
    period: Optional[int] = None


class ReturnMoments(BaseModel):
    """Sample moments of the equity return R = ((1 + c) / c) y."""

    model_config = ConfigDict(frozen=True)

    e_ln_r: float
    ln_e_r: float
    premium: float
    var_ln_r: float
    se_e_ln_r: float
    se_ln_e_r: float
    se_var_ln_r: float
    n_draws: int
