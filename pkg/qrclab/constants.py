"""
Numerical constants and documented defaults for qrclab.

This module collects the fixed data of the benchmark systems (wavevectors,
modal weights, Lorenz-63 parameters), the tolerances used by the quantum
core, and the defaults of the training, metric and sweep layers. Values are
exposed as ``Final`` module attributes with explanatory docstrings.
"""

# ruff: noqa: RUF001, RUF002

from __future__ import annotations

import math
from typing import Final

# =====================================================================================
# QUANTUM CORE
# =====================================================================================

DEFAULT_N_QUBITS: Final[int] = 5
"""Number of qubits of the reservoir Hamiltonian (Hilbert dimension 2^5 = 32)."""

HERMITIAN_TOLERANCE: Final[float] = 1e-8
"""
Largest admissible entry of ``H - H^dagger``.

Matrices whose symmetry residual exceeds this bound are rejected by the
evolution routines.
"""

NORM_TOLERANCE: Final[float] = 1e-10
"""Admissible deviation of a state vector's Euclidean norm from one."""

MEASUREMENT_NORM_TOLERANCE: Final[float] = 1e-8
"""Norm deviation above which a state is refused for measurement."""

IMAGINARY_TOLERANCE: Final[float] = 1e-10
"""Largest imaginary residual of a Pauli expectation that is silently discarded."""

PAULI_AXES: Final[tuple[str, str, str]] = ("x", "y", "z")
"""Ordering of the Pauli axes in feature blocks (axis-major, site-minor)."""

# =====================================================================================
# FIVE-MODE TRUNCATED NAVIER-STOKES
# =====================================================================================

NS5_WAVEVECTORS: Final[tuple[tuple[int, int], ...]] = (
    (0, 1),
    (1, 1),
    (1, 2),
    (2, -1),
    (3, 0),
)
"""Wavevectors k₁..k₅ of the five retained Fourier modes."""

NS5_MODAL_WEIGHTS: Final[tuple[float, ...]] = tuple(
    float(kx * kx + ky * ky) for kx, ky in NS5_WAVEVECTORS
)
"""
Squared wavenumbers |k_i|² = (1, 2, 5, 5, 9).

They are both the linear damping coefficients (Re = 1) and the enstrophy
weights of the modal invariants.
"""

CLASSICAL_NONLINEAR_SCALE: Final[float] = math.sqrt(5.0)
"""
Multiplier of the quadratic terms that recovers the classical five-mode model.

With this scale the conserving variant coincides with the Boldrighini–
Franceschini truncation (up to the sign of u₁), whose Hopf bifurcation sits
near F ≈ 22.85 and whose period-doubling cascade accumulates near F ≈ 28.7.
"""

NS5_COMPONENT_NAMES: Final[tuple[str, ...]] = ("u1", "u2", "u3", "u4", "u5")
"""CSV column labels of NS5 trajectories."""

# =====================================================================================
# LORENZ-63
# =====================================================================================

LORENZ_SIGMA: Final[float] = 10.0
"""Prandtl number σ of the Lorenz-63 system."""

LORENZ_RHO: Final[float] = 28.0
"""Rayleigh parameter ρ of the Lorenz-63 system."""

LORENZ_BETA: Final[float] = 8.0 / 3.0
"""Geometric factor β of the Lorenz-63 system."""

LORENZ_COMPONENT_NAMES: Final[tuple[str, ...]] = ("x", "y", "z")
"""CSV column labels of Lorenz-63 trajectories."""

# =====================================================================================
# INTEGRATION AND DIAGNOSTICS
# =====================================================================================

DEFAULT_TOLERANCE: Final[float] = 1e-10
"""Default absolute and relative tolerance of the Dormand–Prince integrator."""

DEFAULT_TRANSIENT: Final[float] = 100.0
"""Default time discarded before sampling chaotic trajectories."""

NS5_DT_SAMPLE: Final[float] = 0.01
"""Default output spacing of NS5 trajectories."""

LORENZ_DT_SAMPLE: Final[float] = 0.02
"""Default output spacing of Lorenz-63 trajectories (500 steps ≈ 13 LT)."""

MIN_SPECTRAL_SAMPLES: Final[int] = 2**12
"""Minimum series length accepted for dominant-period estimation."""

MIN_RENORMALIZATIONS: Final[int] = 100
"""Minimum number of Benettin renormalization intervals per estimate."""

# =====================================================================================
# TRAINING, METRIC AND SWEEP DEFAULTS
# =====================================================================================

DEFAULT_RIDGE_LAMBDA: Final[float] = 1e-6
"""Default Tikhonov parameter λ of the readout."""

DEFAULT_RESIDUAL_TOLERANCE: Final[float] = 1e-8
"""Relative residual of the normal equations tolerated after refinement."""

DEFAULT_WASHOUT: Final[int] = 100
"""Input steps driven through the reservoir before states are collected."""

DEFAULT_N_TRAIN: Final[int] = 5000
"""Number of teacher-forced training steps N_tr."""

NS5_N_TEST: Final[int] = 2500
"""Default closed-loop horizon for NS5 forecasts."""

LORENZ_N_TEST: Final[int] = 500
"""Default closed-loop horizon for Lorenz-63 forecasts."""

DEFAULT_EPSILON: Final[float] = 0.3
"""Error threshold ε of the valid prediction time."""

DEFAULT_LENGTH_MULTIPLE: Final[int] = 3
"""Reservoir length as a multiple of the feature length (l_r = 3 · len(m))."""

DEFAULT_SHIFT: Final[int] = 1
"""Default cyclic shift n_S of the reservoir memory."""

DEFAULT_N_REALIZATIONS: Final[int] = 30
"""Coupling realizations per sweep cell."""

DEFAULT_GAMMA_GRID: Final[tuple[float, ...]] = (0.0, 0.2, 0.4, 0.6, 0.8, 0.95)
"""Default memory-retention grid."""

DEFAULT_COUPLING_GRID: Final[tuple[float, ...]] = (1e-3, 1e-2, 1e-1, 1.0, 10.0)
"""Default grid for both J and h."""

DEFAULT_TIME_GRID: Final[tuple[float, ...]] = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0)
"""Default grid for both evolution times Δt₁ and Δt₂."""

NS5_EVOLUTION_TIMES: Final[tuple[float, float]] = (2.0, 1.0)
"""Best-known evolution times for NS5 forecasts."""

LORENZ_EVOLUTION_TIMES: Final[tuple[float, float]] = (0.5, 2.0)
"""Best-known evolution times for Lorenz-63 forecasts."""

BEST_COUPLING: Final[float] = 0.01
"""Best-known coupling amplitude J for both benchmarks."""

BEST_TRANSVERSE_FIELD: Final[float] = 0.1
"""Best-known transverse field h for both benchmarks."""

FLOAT_FORMAT: Final[str] = "%.17g"
"""printf-style format giving byte-exact round trips of float64 values."""
