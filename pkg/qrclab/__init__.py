"""
qrclab: Hybrid Quantum-Classical Reservoir Computing for Chaotic Forecasting.

A Python package and CLI that simulates an input-modulated transverse-field
Ising reservoir exactly, couples it to a classical shift-memory layer and a
ridge readout, and benchmarks the resulting forecaster on chaotic flows.

**Key Features:**
- **Exact quantum core**: state-vector evolution of N-qubit Ising reservoirs
  with temporal multiplexing over several evolution times
- **Classical memory**: cyclic-shift reservoir with tunable retention
- **Benchmarks**: five-mode truncated Navier-Stokes and Lorenz-63 generators
  with an adaptive Dormand-Prince integrator
- **Diagnostics**: bifurcation maps, Lyapunov exponents, nonlinear times and
  the valid prediction time (VPT)
- **Sweeps**: deterministic parallel grid search with heatmap export

**Quick Start:**
    >>> import qrclab
    >>> from qrclab.dynamics import Lorenz63System, integrate, IntegratorConfig
    >>> traj = integrate(Lorenz63System().rhs, [1.0, 1.0, 1.0], 10.0,
    ...                  IntegratorConfig(), dt_sample=0.02)
    >>> traj.states.shape
    (501, 3)

**Command-Line Interface:**
Access via the ``qrclab`` command:
- ``generate``: integrate a benchmark system to CSV
- ``bifurcation``: kinetic-energy extrema versus forcing
- ``train-forecast``: full training and closed-loop forecast with VPT report
- ``sweep``: hyperparameter grid search
- ``lyapunov``: leading Lyapunov exponent and Lyapunov time
"""

import os as _os
import sys

if sys.version_info < (3, 12):  # noqa: UP036
    raise ImportError("qrclab requires Python 3.12+; please upgrade your interpreter.")

_os.environ.setdefault("JAX_ENABLE_X64", "1")

__version__ = "0.1.0"

# Logging helpers (lightweight, stdlib-only)
from qrclab.logging_utils import configure_logging, get_logger, log_environment

_LAZY_SUBMODULES = {
    "backend",
    "config",
    "constants",
    "data_handling",
    "dynamics",
    "exceptions",
    "forecasting",
    "interfaces",
    "io",
    "quantum",
    "reservoir",
    "validation",
}

_LAZY_ATTRIBUTES = {
    "HamiltonianSpec": "qrclab.quantum",
    "EvolutionConfig": "qrclab.quantum",
    "StateVector": "qrclab.quantum",
    "FeatureVector": "qrclab.quantum",
    "ReservoirConfig": "qrclab.reservoir",
    "ReadoutModel": "qrclab.reservoir",
    "NS5System": "qrclab.dynamics",
    "Lorenz63System": "qrclab.dynamics",
    "IntegratorConfig": "qrclab.dynamics",
    "Trajectory": "qrclab.dynamics",
    "make_dataset": "qrclab.forecasting",
    "train": "qrclab.forecasting",
    "forecast": "qrclab.forecasting",
    "vpt": "qrclab.forecasting",
    "SweepGrid": "qrclab.data_handling",
    "run_sweep": "qrclab.data_handling",
    "RunConfig": "qrclab.config",
}


# Lazy import heavy modules and functions to improve startup time
def __getattr__(name):  # type: ignore[no-untyped-def]
    import importlib

    if name in _LAZY_SUBMODULES:
        module = importlib.import_module(f"qrclab.{name}")
        globals()[name] = module
        return module
    if name in _LAZY_ATTRIBUTES:
        module = importlib.import_module(_LAZY_ATTRIBUTES[name])
        value = getattr(module, name)
        globals()[name] = value
        return value
    raise AttributeError(f"module '{__name__}' has no attribute '{name}'")


__all__ = [
    "__version__",
    "configure_logging",
    "get_logger",
    "log_environment",
    *sorted(_LAZY_ATTRIBUTES),
]
