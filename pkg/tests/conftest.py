"""Shared fixtures."""
import numpy as np
import pytest

from src.models.search import OptimizerConfig
from src.services.run_logger import RunLogger
from src.services.spectrum_engine import SpectrumEngine


@pytest.fixture
def rng():
    """Deterministic counter-based generator."""
    return np.random.Generator(np.random.Philox(1234))


@pytest.fixture
def fast_config():
    """Reduced-restart optimizer config for scenario tests."""
    return OptimizerConfig(
        restarts=6,
        adam_steps=150,
        lbfgs_iterations=800,
        polish_iterations=200,
        grid_points=5,
        seed=7,
    )


@pytest.fixture
def engine(fast_config):
    """Spectrum engine on the reduced config with a private ledger."""
    return SpectrumEngine(fast_config, run_logger=RunLogger("test"))


@pytest.fixture
def thorough_engine():
    """Engine with more restarts for the five-qubit scenarios."""
    config = OptimizerConfig(
        restarts=16,
        adam_steps=300,
        lbfgs_iterations=3000,
        polish_iterations=400,
        grid_points=7,
        seed=7,
    )
    return SpectrumEngine(config, run_logger=RunLogger("test"))
