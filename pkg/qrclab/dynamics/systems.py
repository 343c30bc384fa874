"""
Benchmark dynamical systems.

Two chaotic generators feed the forecaster: the five-mode Galerkin truncation
of the forced 2-D Navier-Stokes equations (NS5) and the Lorenz-63 system.
Both expose a ``rhs(t, y)`` vector field so they plug straight into
:func:`qrclab.dynamics.integrator.integrate`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
import math
from typing import TYPE_CHECKING, Any, Literal, Protocol, runtime_checkable

import numpy as np

from qrclab.constants import (
    LORENZ_BETA,
    LORENZ_COMPONENT_NAMES,
    LORENZ_RHO,
    LORENZ_SIGMA,
    NS5_COMPONENT_NAMES,
    NS5_MODAL_WEIGHTS,
)
from qrclab.exceptions import ValidationError
from qrclab.validation.validators import validate_choice, validate_real

if TYPE_CHECKING:
    from qrclab.dynamics.integrator import Trajectory
    from qrclab.typing_extensions import ArrayLike, RealArray, StateArray

NS5Variant = Literal["as_written", "conserving"]
NS5_VARIANTS: tuple[str, ...] = ("as_written", "conserving")

_WEIGHTS = np.asarray(NS5_MODAL_WEIGHTS, dtype=np.float64)


@runtime_checkable
class DynamicalSystem(Protocol):
    """Anything the generators, Lyapunov estimator and CLI can integrate."""

    name: str

    @property
    def dim(self) -> int: ...

    @property
    def component_names(self) -> tuple[str, ...]: ...

    def rhs(self, t: float, y: StateArray) -> StateArray: ...

    def initial_state(self, seed: int | None = None) -> StateArray: ...

    def to_dict(self) -> dict[str, Any]: ...


# =====================================================================================
# FIVE-MODE NAVIER-STOKES
# =====================================================================================


@dataclass(frozen=True)
class NS5System:
    """
    Five-mode truncated Navier-Stokes model with Re = 1 and no Rayleigh drag.

    Attributes:
        forcing: Forcing amplitude F acting on u4
        variant: ``"as_written"`` keeps the printed second triad
            (4 u5², +7 u5 u2); ``"conserving"`` uses 4 u4 u5 and -7 u2 u5 so the
            quadratic terms conserve energy and enstrophy
        nonlinear_scale: Common factor on every quadratic term; sqrt(5) gives
            the classical normalisation
        dissipative: Whether the linear damping -|k_i|² u_i is applied
    """

    forcing: float = 33.0
    variant: NS5Variant = "conserving"
    nonlinear_scale: float = 1.0
    dissipative: bool = True
    name: str = "ns5"

    def __post_init__(self) -> None:
        object.__setattr__(self, "forcing", validate_real(self.forcing, "forcing"))
        validate_choice(self.variant, NS5_VARIANTS, "variant")
        object.__setattr__(
            self, "nonlinear_scale", validate_real(self.nonlinear_scale, "nonlinear_scale")
        )

    @property
    def dim(self) -> int:
        return 5

    @property
    def component_names(self) -> tuple[str, ...]:
        return NS5_COMPONENT_NAMES

    def rhs(self, t: float, y: StateArray) -> StateArray:
        """Vector field; ``t`` is unused (autonomous system)."""
        return ns5_rhs(y, self)

    def fixed_point(self) -> StateArray:
        """The laminar state (0, 0, 0, F/5, 0)."""
        return np.array([0.0, 0.0, 0.0, self.forcing / 5.0, 0.0])

    def initial_state(self, seed: int | None = None) -> StateArray:
        """Laminar fixed point plus a small Gaussian kick (scale 1e-3)."""
        rng = np.random.default_rng(seed)
        return self.fixed_point() + 1e-3 * rng.standard_normal(5)

    def with_forcing(self, forcing: float) -> NS5System:
        return NS5System(
            forcing, self.variant, self.nonlinear_scale, self.dissipative, self.name
        )

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def ns5_rhs(u: ArrayLike, sys: NS5System) -> RealArray:
    """
    Right-hand side of the five-mode system.

    Args:
        u: Modal amplitudes (u1..u5)
        sys: System parameters

    Returns:
        Time derivatives of the five modes
    """
    u1, u2, u3, u4, u5 = np.asarray(u, dtype=np.float64)
    s = sys.nonlinear_scale

    if sys.variant == "conserving":
        triad2_u2 = 4.0 * u4 * u5
        triad2_u4 = -7.0 * u2 * u5
    else:
        triad2_u2 = 4.0 * u5 * u5
        triad2_u4 = 7.0 * u5 * u2

    out = np.array(
        [
            s * (3.0 * u3 * u2),
            s * (-4.0 * u3 * u1 + triad2_u2),
            s * (u1 * u2),
            s * triad2_u4 + sys.forcing,
            s * (3.0 * u2 * u4),
        ]
    )
    if sys.dissipative:
        out -= _WEIGHTS * np.array([u1, u2, u3, u4, u5])
    return out


def kinetic_energy(u: ArrayLike) -> float | RealArray:
    """
    Modal kinetic energy E = 1/2 sum u_i².

    Accepts a single state or a stack of states (last axis = modes).
    """
    u = np.asarray(u, dtype=np.float64)
    return 0.5 * np.sum(u * u, axis=-1)


def enstrophy(u: ArrayLike) -> float | RealArray:
    """Modal enstrophy: 1/2 sum |k_i|² u_i² with weights (1, 2, 5, 5, 9)."""
    u = np.asarray(u, dtype=np.float64)
    return 0.5 * np.sum(_WEIGHTS * u * u, axis=-1)


def triad_sums(sys: NS5System) -> dict[str, tuple[float, float]]:
    """
    Energy- and enstrophy-weighted coefficient sums of both interacting triads.

    A triad conserves the two quadratic invariants iff both sums vanish. The
    conserving variant returns zeros; the printed equations do not.
    """
    if sys.variant == "conserving":
        second = {2: 4.0, 4: -7.0, 5: 3.0}
    else:
        # the printed 4 u5² term in u2 carries no u4 u5 product
        second = {2: 0.0, 4: 7.0, 5: 3.0}
    first = {1: 3.0, 2: -4.0, 3: 1.0}

    def sums(coefficients: dict[int, float]) -> tuple[float, float]:
        energy = sum(coefficients.values())
        weighted = sum(NS5_MODAL_WEIGHTS[i - 1] * c for i, c in coefficients.items())
        return float(energy), float(weighted)

    return {"triad_123": sums(first), "triad_245": sums(second)}


def energy_phase_portrait(traj: Trajectory, sys: NS5System) -> RealArray:
    """
    Energy phase portrait (E_k, dE_k/dt) along a trajectory.

    The rate is evaluated from the vector field, dE/dt = sum u_i du_i/dt.

    Returns:
        Array of shape ``(n_steps, 2)``
    """
    states = np.asarray(traj.states, dtype=np.float64)
    if states.ndim != 2 or states.shape[1] != sys.dim:
        raise ValidationError(
            "Trajectory does not match the NS5 dimension",
            parameter="traj",
            value=states.shape,
        )
    rates = np.array([np.dot(u, ns5_rhs(u, sys)) for u in states])
    return np.column_stack([kinetic_energy(states), rates])


# =====================================================================================
# LORENZ-63
# =====================================================================================


@dataclass(frozen=True)
class Lorenz63System:
    """Lorenz-63 system with the standard chaotic parameters by default."""

    sigma: float = LORENZ_SIGMA
    rho: float = LORENZ_RHO
    beta: float = LORENZ_BETA
    name: str = "lorenz63"

    def __post_init__(self) -> None:
        for field_name in ("sigma", "rho", "beta"):
            object.__setattr__(
                self, field_name, validate_real(getattr(self, field_name), field_name)
            )

    @property
    def dim(self) -> int:
        return 3

    @property
    def component_names(self) -> tuple[str, ...]:
        return LORENZ_COMPONENT_NAMES

    def rhs(self, t: float, y: StateArray) -> StateArray:
        return lorenz_rhs(y, self)

    def fixed_points(self) -> tuple[StateArray, ...]:
        """Origin and, for rho > 1, the symmetric pair C±."""
        origin = np.zeros(3)
        if self.rho <= 1.0:
            return (origin,)
        a = math.sqrt(self.beta * (self.rho - 1.0))
        z = self.rho - 1.0
        return origin, np.array([a, a, z]), np.array([-a, -a, z])

    def initial_state(self, seed: int | None = None) -> StateArray:
        """(1, 1, 1); the seed is accepted for interface symmetry and ignored."""
        return np.ones(3)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def lorenz_rhs(state: ArrayLike, sys: Lorenz63System) -> RealArray:
    """(sigma (y - x), x (rho - z) - y, x y - beta z)."""
    x, y, z = np.asarray(state, dtype=np.float64)
    return np.array(
        [
            sys.sigma * (y - x),
            x * (sys.rho - z) - y,
            x * y - sys.beta * z,
        ]
    )


def make_system(
    name: str,
    *,
    forcing: float = 33.0,
    variant: str = "conserving",
    nonlinear_scale: float = 1.0,
    dissipative: bool = True,
    sigma: float = LORENZ_SIGMA,
    rho: float = LORENZ_RHO,
    beta: float = LORENZ_BETA,
) -> NS5System | Lorenz63System:
    """Build a system by name (``"ns5"`` or ``"lorenz63"``)."""
    validate_choice(name, ("ns5", "lorenz63"), "system")
    if name == "ns5":
        return NS5System(forcing, variant, nonlinear_scale, dissipative)  # type: ignore[arg-type]
    return Lorenz63System(sigma, rho, beta)
