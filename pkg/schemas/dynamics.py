from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from data_types import GammaPathKind


class GammaPath(BaseModel):
    """Deterministic, eventually-constant path of risk-aversion coefficients.

    Period 0 is "now". A permanent step moves gamma from base_gamma to
    base_gamma + shock_delta at shock_time and keeps it there; a transitory
    pulse moves it for exactly one period. A custom path lists gamma_0,
    gamma_1, ... explicitly and then stays at terminal_gamma forever.
    """

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    kind: GammaPathKind
    base_gamma: float = Field(gt=0.0)
    shock_delta: float = 0.0
    shock_time: int = Field(default=1, ge=0)
    custom_values: Tuple[float, ...] = ()
    terminal_gamma: Optional[float] = None

    @model_validator(mode="after")
    def check_path(self) -> "GammaPath":
        if self.kind in (GammaPathKind.PERMANENT_STEP, GammaPathKind.TRANSITORY_PULSE):
            if self.shock_time < 1:
                raise ValueError("shock_time must be at least 1 so a pre-shock period exists")
            if self.base_gamma + self.shock_delta <= 0.0:
                raise ValueError("gamma after the shock must stay positive")
        if self.kind is GammaPathKind.CUSTOM:
            if self.terminal_gamma is None:
                raise ValueError("custom gamma paths must declare terminal_gamma")
            if self.terminal_gamma <= 0.0 or any(value <= 0.0 for value in self.custom_values):
                raise ValueError("every gamma value must be positive")
        elif self.custom_values or self.terminal_gamma is not None:
            raise ValueError("custom_values and terminal_gamma apply to custom paths only")
        return self

    @classmethod
    def constant(cls, gamma: float) -> "GammaPath":
        return cls(kind=GammaPathKind.CONSTANT, base_gamma=gamma)

    @classmethod
    def permanent_step(cls, base_gamma: float, shock_delta: float, shock_time: int = 1) -> "GammaPath":
        return cls(
            kind=GammaPathKind.PERMANENT_STEP,
            base_gamma=base_gamma,
            shock_delta=shock_delta,
            shock_time=shock_time,
        )

    @classmethod
    def transitory_pulse(cls, base_gamma: float, shock_delta: float, shock_time: int = 1) -> "GammaPath":
        return cls(
            kind=GammaPathKind.TRANSITORY_PULSE,
            base_gamma=base_gamma,
            shock_delta=shock_delta,
            shock_time=shock_time,
        )

    @classmethod
    def custom(cls, values, terminal_gamma: float) -> "GammaPath":
        values = tuple(float(value) for value in values)
        return cls(
            kind=GammaPathKind.CUSTOM,
            base_gamma=values[0] if values else terminal_gamma,
            custom_values=values,
            terminal_gamma=terminal_gamma,
        )

    @property
    def settle_time(self) -> int:
        """First period T* from which gamma stays at its terminal value."""
        if self.kind is GammaPathKind.PERMANENT_STEP:
            return self.shock_time
        if self.kind is GammaPathKind.TRANSITORY_PULSE:
            return self.shock_time + 1
        if self.kind is GammaPathKind.CUSTOM:
            return len(self.custom_values)
        return 0

    @property
    def gamma_infinity(self) -> float:
        if self.kind is GammaPathKind.PERMANENT_STEP:
            return self.base_gamma + self.shock_delta
        if self.kind is GammaPathKind.CUSTOM:
            return self.terminal_gamma
        return self.base_gamma

    def gamma_at(self, t: int) -> float:
        if t < 0:
            raise ValueError("period index must be non-negative")
        if t >= self.settle_time:
            return self.gamma_infinity
        if self.kind is GammaPathKind.CUSTOM:
            return self.custom_values[t]
        if self.kind is GammaPathKind.TRANSITORY_PULSE and t == self.shock_time:
            return self.base_gamma + self.shock_delta
        return self.base_gamma

    def values(self, horizon: int) -> np.ndarray:
        """gamma_0 .. gamma_horizon."""
        return np.array([self.gamma_at(t) for t in range(horizon + 1)], dtype=float)


class DynamicSolution(BaseModel):
    """Price-dividend ratios c_0 .. c_horizon under a gamma path."""

    model_config = ConfigDict(frozen=True)

    horizon: int = Field(ge=0)
    gamma_series: Tuple[float, ...]
    h_series: Tuple[float, ...]
    c_series: Tuple[float, ...]
    ln_rf_series: Tuple[float, ...]
    premium_series: Tuple[float, ...]
    terminal_c: float = Field(gt=0.0)

    @model_validator(mode="after")
    def check_lengths(self) -> "DynamicSolution":
        expected = self.horizon + 1
        for name in ("gamma_series", "h_series", "c_series", "ln_rf_series", "premium_series"):
            if len(getattr(self, name)) != expected:
                raise ValueError(f"{name} must hold horizon + 1 = {expected} values")
        if any(c <= 0.0 for c in self.c_series):
            raise ValueError("every price-dividend ratio must be positive")
        return self

    @property
    def c(self) -> np.ndarray:
        return np.asarray(self.c_series)
