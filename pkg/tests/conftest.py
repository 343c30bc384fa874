"""
Shared test configuration and fixtures for qrclab tests.

This module provides common fixtures (random generators, a short Lorenz-63
trajectory, a small dataset and pipeline) and the ``--run-slow`` switch for
the acceptance suite.
"""

import gc
import os

# JAX preallocates most of the GPU memory per process at device init; under
# pytest-xdist every worker is its own process. Must run before qrclab (and
# thus JAX) is imported below.
os.environ.setdefault("XLA_PYTHON_CLIENT_PREALLOCATE", "false")
os.environ.setdefault("XLA_PYTHON_CLIENT_MEM_FRACTION", ".05")
# keep test runs out of the user's log directory
os.environ.setdefault("QRCLAB_LOG_FILE", "")
os.environ.setdefault("QRCLAB_LOG_CONSOLE", "0")

import numpy as np
import pytest

from qrclab.dynamics.integrator import IntegratorConfig, integrate
from qrclab.dynamics.systems import Lorenz63System
from qrclab.forecasting.dataset import make_dataset
from qrclab.logging_utils import reset_logging
from qrclab.quantum.evolution import EvolutionConfig
from qrclab.quantum.hamiltonian import HamiltonianTemplate
from qrclab.quantum.observables import feature_length
from qrclab.reservoir.memory import ReservoirConfig
from tests.fixtures.test_config import SMALL_PIPELINE

LORENZ_DT = 0.02
LORENZ_TRANSIENT = 10.0


def pytest_addoption(parser):
    """Add custom command-line options."""
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="run slow and acceptance tests",
    )


def pytest_collection_modifyitems(config, items):
    """Skip slow and acceptance tests unless --run-slow is given."""
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords or "acceptance" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def enforce_test_isolation():
    """Reset logging handlers and collect garbage between tests."""
    reset_logging()
    yield
    reset_logging()
    gc.collect()


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def lorenz_system():
    """Lorenz-63 with the classical parameters."""
    return Lorenz63System()


@pytest.fixture(scope="session")
def lorenz_trajectory(lorenz_system):
    """Lorenz-63 trajectory long enough for the small pipeline."""
    n_rows = (
        SMALL_PIPELINE["n_washout"]
        + SMALL_PIPELINE["n_train"]
        + SMALL_PIPELINE["n_test"]
    )
    return integrate(
        lorenz_system.rhs,
        lorenz_system.initial_state(),
        LORENZ_TRANSIENT + (n_rows - 1) * LORENZ_DT,
        IntegratorConfig(abs_tol=1e-9, rel_tol=1e-9),
        dt_sample=LORENZ_DT,
        sample_from=LORENZ_TRANSIENT,
        component_names=lorenz_system.component_names,
    )


@pytest.fixture(scope="session")
def small_dataset(lorenz_trajectory):
    """Washout, training and test segments of the Lorenz trajectory."""
    return make_dataset(
        lorenz_trajectory,
        n_train=SMALL_PIPELINE["n_train"],
        n_washout=SMALL_PIPELINE["n_washout"],
        n_test=SMALL_PIPELINE["n_test"],
    )


@pytest.fixture
def small_pipeline():
    """Hamiltonian template, evolution times and reservoir for three qubits."""
    n_qubits = SMALL_PIPELINE["n_qubits"]
    template = HamiltonianTemplate(
        coupling_amplitude=0.01, transverse_field=0.1, n_qubits=n_qubits
    )
    evolution = EvolutionConfig((0.5, 2.0))
    reservoir = ReservoirConfig.for_features(
        feature_length(n_qubits, evolution.n_times), gamma=0.8, shift=1, multiple=2
    )
    return template, evolution, reservoir
