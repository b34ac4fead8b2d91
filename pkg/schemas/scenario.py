from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.config.settings import settings
from schemas.dynamics import GammaPath
from schemas.economy import GrowthProcess, Preferences
from schemas.simulation import SimulationConfig


class SweepAxis(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    parameter: str
    start: float
    stop: float
    count: int = Field(ge=1)

    @field_validator("parameter")
    @classmethod
    def parameter_known(cls, value: str) -> str:
        if value not in settings.SWEEP_PARAMETERS:
            known = ", ".join(settings.SWEEP_PARAMETERS)
            raise ValueError(f"sweep parameter must be one of: {known}")
        return value


class Scenario(BaseModel):
    model_config = ConfigDict(frozen=True)

    preferences: Preferences
    growth: GrowthProcess
    gamma_path: Optional[GammaPath] = None
    simulation: Optional[SimulationConfig] = None
    sweep: Optional[SweepAxis] = None

    @property
    def simulation_or_default(self) -> SimulationConfig:
        return self.simulation or SimulationConfig()

    def with_simulation_overrides(
        self, seed: Optional[int] = None, n_draws: Optional[int] = None
    ) -> "Scenario":
        if seed is None and n_draws is None:
            return self
        current = self.simulation_or_default.model_dump()
        if seed is not None:
            current["seed"] = seed
        if n_draws is not None:
            current["n_draws"] = n_draws
        return Scenario(
            preferences=self.preferences,
            growth=self.growth,
            gamma_path=self.gamma_path,
            simulation=SimulationConfig(**current),
            sweep=self.sweep,
        )
