from pathlib import Path
from typing import List, Tuple

import numpy as np
import pytest

from schemas.economy import GrowthProcess, Preferences
from schemas.simulation import SimulationConfig
from services import pricing_core

SCENARIO_DIR = Path(__file__).parent / "scenarios"


@pytest.fixture
def standard_prefs() -> Preferences:
    return Preferences(delta=0.02, rho=0.5, gamma=2.0)


@pytest.fixture
def standard_growth() -> GrowthProcess:
    return GrowthProcess(mu=0.018, sigma2=0.0013)


@pytest.fixture
def riskless_growth() -> GrowthProcess:
    return GrowthProcess(mu=0.0, sigma2=0.0)


@pytest.fixture
def mc_config() -> SimulationConfig:
    return SimulationConfig(n_draws=200_000, stream_count=4, seed=12_345, horizon=10)


@pytest.fixture
def scenario_dir() -> Path:
    return SCENARIO_DIR


def parameter_grid(size: int = 100, seed: int = 2024) -> List[Tuple[Preferences, GrowthProcess]]:
    """Random (prefs, growth) points with a well-defined equilibrium, h bounded away from 1."""
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < size:
        rho = rng.uniform(0.1, 5.0)
        if abs(rho - 1.0) < 1e-3:
            continue
        prefs = Preferences(delta=rng.uniform(0.001, 0.1), rho=rho, gamma=rng.uniform(0.1, 10.0))
        growth = GrowthProcess(mu=rng.uniform(-0.02, 0.05), sigma2=rng.uniform(0.0, 0.01))
        if pricing_core.log_h(prefs, growth) < -1e-4:
            points.append((prefs, growth))
    return points


@pytest.fixture(scope="session")
def pricing_grid() -> List[Tuple[Preferences, GrowthProcess]]:
    return parameter_grid()
