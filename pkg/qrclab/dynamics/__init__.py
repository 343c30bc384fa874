"""
Benchmark generators and their diagnostics.

Vector fields of the five-mode Navier-Stokes truncation and Lorenz-63, an
adaptive Dormand-Prince integrator, bifurcation maps, Lyapunov exponents and
spectral time scales.
"""

from qrclab.dynamics.bifurcation import (
    BifurcationResult,
    bifurcation_map,
    count_distinct,
    energy_extrema,
)
from qrclab.dynamics.integrator import (
    AdvanceResult,
    IntegratorConfig,
    Trajectory,
    advance,
    advance_with_stats,
    dopri_step,
    integrate,
    integrate_fixed,
)
from qrclab.dynamics.lyapunov import LyapunovResult, lyapunov_exponent
from qrclab.dynamics.spectral import dominant_period, nonlinear_times
from qrclab.dynamics.systems import (
    DynamicalSystem,
    Lorenz63System,
    NS5System,
    energy_phase_portrait,
    enstrophy,
    kinetic_energy,
    lorenz_rhs,
    make_system,
    ns5_rhs,
    triad_sums,
)

__all__ = [
    "AdvanceResult",
    "BifurcationResult",
    "DynamicalSystem",
    "IntegratorConfig",
    "Lorenz63System",
    "LyapunovResult",
    "NS5System",
    "Trajectory",
    "advance",
    "advance_with_stats",
    "bifurcation_map",
    "count_distinct",
    "dominant_period",
    "dopri_step",
    "energy_extrema",
    "energy_phase_portrait",
    "enstrophy",
    "integrate",
    "integrate_fixed",
    "kinetic_energy",
    "lorenz_rhs",
    "lyapunov_exponent",
    "make_system",
    "nonlinear_times",
    "ns5_rhs",
    "triad_sums",
]
