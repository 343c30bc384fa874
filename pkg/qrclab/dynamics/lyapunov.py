"""
Leading Lyapunov exponent by the two-trajectory renormalization method.

A fiducial and a perturbed copy of the state are integrated together as one
augmented system, so both see the same step sequence. After every interval
``renorm_dt`` the log-growth of their separation is accumulated and the
perturbed copy is pulled back to distance ``d0`` along the current
separation direction.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
import logging
import math
from typing import TYPE_CHECKING, Any

import numpy as np

from qrclab.constants import DEFAULT_TRANSIENT
from qrclab.dynamics.integrator import IntegratorConfig, advance
from qrclab.exceptions import LyapunovError, ValidationError
from qrclab.validation.validators import (
    validate_finite_array,
    validate_non_negative,
    validate_positive,
)

if TYPE_CHECKING:
    from qrclab.typing_extensions import ArrayLike, StateArray, VectorField

logger = logging.getLogger(__name__)

# separation growth per interval beyond which linearization is lost
MAX_GROWTH = 1e12


@dataclass(frozen=True)
class LyapunovResult:
    """Estimated exponent with its Lyapunov time (None if the flow contracts)."""

    exponent: float
    n_renormalizations: int
    horizon: float
    renorm_dt: float

    @property
    def lyapunov_time(self) -> float | None:
        return 1.0 / self.exponent if self.exponent > 0.0 else None

    def to_dict(self) -> dict[str, Any]:
        return {**asdict(self), "lyapunov_time": self.lyapunov_time}


def _augmented(rhs: VectorField, n: int) -> VectorField:
    def field(t: float, z: StateArray) -> StateArray:
        return np.concatenate([rhs(t, z[:n]), rhs(t, z[n:])])

    return field


def lyapunov_exponent(
    rhs: VectorField,
    y0: ArrayLike,
    horizon: float,
    renorm_dt: float = 0.5,
    d0: float = 1e-8,
    *,
    transient: float = DEFAULT_TRANSIENT,
    cfg: IntegratorConfig | None = None,
    min_renormalizations: int = 1,
) -> LyapunovResult:
    """
    Estimate the leading Lyapunov exponent.

    Args:
        rhs: Vector field ``rhs(t, y)``
        y0: Starting state; the fiducial first relaxes for ``transient``
        horizon: Averaging time after the transient
        renorm_dt: Interval between renormalizations
        d0: Initial and renormalized separation
        transient: Relaxation time before the pair is seeded
        cfg: Step control
        min_renormalizations: Refuse horizons with fewer intervals

    Returns:
        ``LyapunovResult`` with the mean log-growth rate

    Raises:
        ValidationError: If the horizon is too short
        LyapunovError: If the separation collapses, blows up or turns non-finite
    """
    renorm_dt = validate_positive(renorm_dt, "renorm_dt")
    horizon = validate_positive(horizon, "horizon")
    d0 = validate_positive(d0, "d0")
    transient = validate_non_negative(transient, "transient")
    cfg = cfg or IntegratorConfig()
    y = validate_finite_array(y0, "y0", ndim=1)

    n_intervals = int(round(horizon / renorm_dt))
    if n_intervals < max(1, min_renormalizations):
        raise ValidationError(
            f"Horizon covers fewer than {max(1, min_renormalizations)} renormalizations",
            parameter="horizon",
            value=horizon,
        )

    n = y.size
    if transient > 0.0:
        y = advance(rhs, y, 0.0, transient, cfg)
    direction = np.ones(n) / math.sqrt(n)
    z = np.concatenate([y, y + d0 * direction])
    field = _augmented(rhs, n)

    log_sum = 0.0
    t = transient
    for step in range(n_intervals):
        t_next = transient + (step + 1) * renorm_dt
        z = advance(field, z, t, t_next, cfg)
        t = t_next
        delta = z[n:] - z[:n]
        d = float(np.linalg.norm(delta))
        if not math.isfinite(d) or not np.all(np.isfinite(z)):
            raise LyapunovError("Non-finite state during renormalization", step=step)
        if d <= 0.0:
            raise LyapunovError("Separation underflow", step=step)
        if d / d0 > MAX_GROWTH:
            raise LyapunovError("Separation overflow", step=step)
        log_sum += math.log(d / d0)
        z[n:] = z[:n] + delta * (d0 / d)

    exponent = log_sum / (n_intervals * renorm_dt)
    logger.debug(
        "Lyapunov estimate",
        extra={"exponent": exponent, "n_renormalizations": n_intervals},
    )
    return LyapunovResult(exponent, n_intervals, n_intervals * renorm_dt, renorm_dt)
