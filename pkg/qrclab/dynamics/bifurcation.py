"""
Bifurcation maps of the five-mode system.

For every forcing value the system is integrated past a transient and the
strict local maxima and minima of the kinetic energy are recorded over an
observation window. A fixed point yields no extrema, a limit cycle a small
finite set, and chaos a continuum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
from typing import TYPE_CHECKING

import numpy as np
from scipy.signal import argrelextrema

from qrclab.constants import DEFAULT_TRANSIENT, NS5_DT_SAMPLE
from qrclab.data_handling.batch_processing import BatchConfig, map_tasks
from qrclab.dynamics.integrator import IntegratorConfig, integrate
from qrclab.dynamics.systems import NS5System, kinetic_energy
from qrclab.exceptions import ValidationError
from qrclab.validation.validators import validate_finite_array, validate_positive

if TYPE_CHECKING:
    from qrclab.typing_extensions import ArrayLike, RealArray

logger = logging.getLogger(__name__)

# relative peak-to-peak spread below which E_k counts as constant
FLAT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ForcingTask:
    """One column of the bifurcation map."""

    system: NS5System
    transient: float
    window: float
    integrator: IntegratorConfig
    dt_sample: float
    seed: int | None


@dataclass(frozen=True)
class BifurcationResult:
    """
    Flattened bifurcation map.

    Attributes:
        forcing: F of every recorded extremum
        extrema: Extremum values of E_k, aligned with ``forcing``
        kinds: ``"max"`` or ``"min"`` per extremum
        failures: Forcing values whose integration failed, with the reason
    """

    forcing: RealArray
    extrema: RealArray
    kinds: tuple[str, ...]
    failures: dict[float, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.extrema.size)

    def at(self, forcing: float) -> RealArray:
        """All extrema recorded at one forcing value."""
        return self.extrema[self.forcing == forcing]

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.forcing.tolist(), self.extrema.tolist(), strict=True))


def energy_extrema(energy: ArrayLike) -> tuple[RealArray, RealArray]:
    """
    Strict interior local maxima and minima of a sampled series.

    A sample counts only if it is strictly above (below) both neighbours, so
    plateau interiors are dropped. Series whose spread is below
    ``FLAT_TOLERANCE`` relative to their magnitude are treated as constant.

    Returns:
        Tuple ``(maxima, minima)`` in time order
    """
    e = np.asarray(energy, dtype=np.float64)
    if e.size < 3 or np.ptp(e) <= FLAT_TOLERANCE * max(1.0, float(np.max(np.abs(e)))):
        empty = np.empty(0)
        return empty, empty
    (imax,) = argrelextrema(e, np.greater)
    (imin,) = argrelextrema(e, np.less)
    return e[imax], e[imin]


def _scan_forcing(task: ForcingTask) -> tuple[RealArray, RealArray]:
    system = task.system
    traj = integrate(
        system.rhs,
        system.initial_state(task.seed),
        task.transient + task.window,
        task.integrator,
        dt_sample=task.dt_sample,
        sample_from=task.transient,
    )
    return energy_extrema(kinetic_energy(traj.states))


def bifurcation_map(
    f_values: ArrayLike,
    transient: float = DEFAULT_TRANSIENT,
    window: float = 200.0,
    *,
    system: NS5System | None = None,
    integrator: IntegratorConfig | None = None,
    dt_sample: float = NS5_DT_SAMPLE,
    seed: int | None = 0,
    batch: BatchConfig | None = None,
) -> BifurcationResult:
    """
    Record the kinetic-energy extrema for every forcing value.

    Args:
        f_values: Forcing values F
        transient: Time discarded before recording
        window: Observation time after the transient
        system: Template system; its forcing is replaced per column
        integrator: Step control
        dt_sample: Spacing of the dense-output samples searched for extrema
        seed: Seed of the initial perturbation of the laminar state
        batch: Worker settings; columns are independent

    Returns:
        ``BifurcationResult`` ordered by forcing, then maxima before minima.
        Integration failures are recorded in ``failures`` and the scan goes on.
    """
    f_values = validate_finite_array(f_values, "f_values", ndim=1)
    if f_values.size == 0:
        raise ValidationError("At least one forcing value is required", "f_values")
    transient = validate_positive(transient, "transient")
    window = validate_positive(window, "window")
    system = system or NS5System()
    integrator = integrator or IntegratorConfig()
    batch = batch or BatchConfig(max_workers=1, enable_progress=False)

    tasks = [
        ForcingTask(
            system.with_forcing(float(f)), transient, window, integrator, dt_sample, seed
        )
        for f in f_values
    ]
    columns: dict[int, tuple[RealArray, RealArray]] = {}
    failures: dict[float, str] = {}
    for outcome in map_tasks(_scan_forcing, tasks, batch, desc="Bifurcation scan"):
        f = float(f_values[outcome.index])
        if outcome.ok:
            columns[outcome.index] = outcome.value  # type: ignore[assignment]
        else:
            failures[f] = outcome.error or "unknown error"
            logger.warning(
                "Forcing value failed", extra={"forcing": f, "error": outcome.error}
            )

    forcing: list[float] = []
    extrema: list[float] = []
    kinds: list[str] = []
    for index in sorted(columns):
        maxima, minima = columns[index]
        f = float(f_values[index])
        if maxima.size == 0 and minima.size == 0:
            logger.info("No extrema (steady state)", extra={"forcing": f})
        for kind, values in (("max", maxima), ("min", minima)):
            forcing.extend([f] * values.size)
            extrema.extend(values.tolist())
            kinds.extend([kind] * values.size)

    return BifurcationResult(
        np.asarray(forcing, dtype=np.float64),
        np.asarray(extrema, dtype=np.float64),
        tuple(kinds),
        failures,
    )


def count_distinct(values: ArrayLike, tolerance: float = 1e-3) -> int:
    """Number of clusters after merging sorted values closer than ``tolerance``."""
    v = np.sort(np.asarray(values, dtype=np.float64))
    if v.size == 0:
        return 0
    return int(1 + np.count_nonzero(np.diff(v) > tolerance))
