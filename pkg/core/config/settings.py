"""
Application Configuration Settings

Centralized defaults for the pricing, dynamics and Monte Carlo layers.
Scenario files and CLI flags override these at run time.
"""

import os
from typing import Dict, List, Tuple


class Settings:
    """Application settings configuration"""

    # Monte Carlo defaults
    DEFAULT_N_DRAWS: int = 1_000_000
    DEFAULT_SEED: int = 20_240_917
    DEFAULT_STREAM_COUNT: int = 8
    DEFAULT_HORIZON: int = 10
    MAX_WORKERS: int = min(8, os.cpu_count() or 1)

    # Tolerance policy
    IDENTITY_TOL: float = 1e-12
    EXP_TOL: float = 1e-10
    SIGN_TOLERANCE: float = 1e-14
    TRUNCATION_TOL: float = 1e-12
    BISECTION_TOL: float = 1e-10
    BRACKET: Tuple[float, float] = (1e-6, 1e6)

    # Finite differences
    FD_STEP: float = 1e-4
    FD_TOL: float = 1e-8

    # Verification gates
    Z_GATE: float = 4.0
    POWER_Z: float = 3.0
    POWER_MISPRICING: float = 0.05
    # expected |z| a power check needs before it may fail verification
    POWER_GATE_Z: float = 6.0

    # (rho, gamma) variations checked by `verify` around the scenario anchor
    VERIFY_GRID: List[Tuple[float, float]] = [
        (0.5, 2.0),
        (0.5, 10.0),
        (2.0, 2.0),
        (2.0, 10.0),
        (0.25, 5.0),
        (4.0, 5.0),
    ]

    # Parameters a sweep axis may name, mapped to the model they live on
    SWEEP_PARAMETERS: Dict[str, str] = {
        'gamma': 'preferences',
        'rho': 'preferences',
        'delta': 'preferences',
        'mu': 'growth',
        'sigma2': 'growth',
    }

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


# Global settings instance
settings = Settings()
