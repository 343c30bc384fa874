"""
Adaptive Dormand-Prince 5(4) integrator with dense output.

The stepper uses the standard DOPRI5 tableau, an embedded fourth-order error
estimate, proportional-integral step-size control and the quartic dense
output of the fifth-order solution, which samples the trajectory on a
uniform grid independent of the internal steps.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
import logging
import math
from typing import TYPE_CHECKING, Any, NamedTuple

import numpy as np

from qrclab.constants import DEFAULT_TOLERANCE
from qrclab.exceptions import IntegrationError, ValidationError
from qrclab.validation.validators import (
    validate_finite_array,
    validate_non_negative,
    validate_positive,
    validate_positive_int,
)

if TYPE_CHECKING:
    from qrclab.typing_extensions import ArrayLike, RealArray, StateArray, VectorField

logger = logging.getLogger(__name__)

# =====================================================================================
# DORMAND-PRINCE TABLEAU
# =====================================================================================

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0])
_A = (
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
# difference between the 5th- and embedded 4th-order weights (7 stages, FSAL)
_E = np.array(
    [-71 / 57600, 0.0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40]
)
# dense output: y(t + x h) = y + h * (K^T P) @ [x, x², x³, x⁴]
_P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

_ORDER = 5
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0


@dataclass(frozen=True)
class IntegratorConfig:
    """
    Step-control settings.

    Attributes:
        abs_tol: Absolute tolerance of the local error
        rel_tol: Relative tolerance of the local error
        max_step: Largest internal step
        initial_step: First trial step
        beta: Integral gain of the PI controller (0 gives plain error control)
    """

    abs_tol: float = DEFAULT_TOLERANCE
    rel_tol: float = DEFAULT_TOLERANCE
    max_step: float = 1.0
    initial_step: float = 1e-3
    beta: float = 0.04

    def __post_init__(self) -> None:
        for name in ("abs_tol", "rel_tol", "max_step", "initial_step"):
            object.__setattr__(self, name, validate_positive(getattr(self, name), name))
        object.__setattr__(self, "beta", validate_non_negative(self.beta, "beta"))
        if self.beta >= 0.2:
            raise ValidationError("PI gain must stay below 0.2", "beta", self.beta)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Uniformly sampled multivariate time series.

    Attributes:
        times: Sample times, spacing ``dt_sample``
        states: Matrix of shape ``(n_steps, dim)``
        dt_sample: Output spacing
        component_names: Column labels used by exporters
    """

    times: RealArray
    states: StateArray
    dt_sample: float
    component_names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        times = validate_finite_array(self.times, "times", ndim=1)
        states = validate_finite_array(self.states, "states", ndim=2)
        dt = validate_positive(self.dt_sample, "dt_sample")
        if states.shape[0] != times.size:
            raise ValidationError(
                "Row count does not match number of times",
                parameter="states",
                value=(states.shape[0], times.size),
            )
        if times.size > 1:
            grid = times[0] + dt * np.arange(times.size)
            tol = 1e-12 * dt + 8.0 * np.finfo(np.float64).eps * np.abs(times)
            if np.any(np.abs(times - grid) > tol):
                raise ValidationError("Times are not uniformly spaced", "times")
        names = tuple(self.component_names) or tuple(
            f"comp_{i + 1}" for i in range(states.shape[1])
        )
        if len(names) != states.shape[1]:
            raise ValidationError(
                "One name per component is required", "component_names", names
            )
        times.flags.writeable = False
        states.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "dt_sample", dt)
        object.__setattr__(self, "component_names", names)

    @property
    def n_steps(self) -> int:
        return int(self.times.size)

    @property
    def dim(self) -> int:
        return int(self.states.shape[1])

    def __len__(self) -> int:
        return self.n_steps

    def segment(self, start: int, stop: int) -> Trajectory:
        """Rows ``[start, stop)`` as a new trajectory."""
        if not 0 <= start <= stop <= self.n_steps:
            raise ValidationError(
                "Segment exceeds trajectory length",
                parameter="segment",
                value=(start, stop, self.n_steps),
            )
        return Trajectory(
            self.times[start:stop],
            self.states[start:stop],
            self.dt_sample,
            self.component_names,
        )


# =====================================================================================
# STEPPING
# =====================================================================================


def _stages(
    rhs: VectorField, t: float, y: StateArray, f: StateArray, h: float
) -> tuple[StateArray, StateArray, np.ndarray]:
    """Run one DOPRI5 step; returns ``(y_new, f_new, K)`` with K of shape (7, n)."""
    K = np.empty((7, y.size))
    K[0] = f
    for s in range(1, 6):
        dy = _A[s] @ K[:s] * h
        K[s] = rhs(t + _C[s] * h, y + dy)
    y_new = y + h * (_B @ K[:6])
    K[6] = rhs(t + h, y_new)
    return y_new, K[6], K


def dopri_step(
    rhs: VectorField, t: float, y: ArrayLike, h: float
) -> tuple[StateArray, StateArray]:
    """
    Single fixed-size Dormand-Prince step.

    Returns:
        Tuple ``(y_new, error_estimate)``
    """
    y = np.asarray(y, dtype=np.float64)
    y_new, _, K = _stages(rhs, t, y, np.asarray(rhs(t, y), dtype=np.float64), h)
    return y_new, h * (_E @ K)


def integrate_fixed(
    rhs: VectorField, y0: ArrayLike, t_end: float, n_steps: int
) -> StateArray:
    """Endpoint of ``n_steps`` equal Dormand-Prince steps from t = 0."""
    n_steps = validate_positive_int(n_steps, "n_steps")
    y = np.asarray(y0, dtype=np.float64).copy()
    h = validate_positive(t_end, "t_end") / n_steps
    for i in range(n_steps):
        y, _ = dopri_step(rhs, i * h, y, h)
    return y


def _error_norm(
    error: StateArray, y: StateArray, y_new: StateArray, cfg: IntegratorConfig
) -> float:
    """Largest component error relative to ``max(abs_tol, rel_tol * |y|)``."""
    scale = np.maximum(cfg.abs_tol, cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new)))
    return float(np.max(np.abs(error) / scale))


class _Stepper:
    """Adaptive DOPRI5 state machine with PI step control."""

    def __init__(
        self, rhs: VectorField, t0: float, y0: StateArray, t_bound: float, cfg: IntegratorConfig
    ):
        self.rhs = rhs
        self.cfg = cfg
        self.t = t0
        self.y = y0
        self.t_bound = t_bound
        self.f = np.asarray(rhs(t0, y0), dtype=np.float64)
        self.h = min(cfg.initial_step, cfg.max_step, t_bound - t0)
        self.err_old = 1e-4
        self.expo = 1.0 / _ORDER - 0.75 * cfg.beta
        self.n_accepted = 0
        self.n_rejected = 0
        # state of the last accepted step, for dense output
        self.t_old = t0
        self.y_old = y0
        self.K: np.ndarray | None = None

    def step(self) -> None:
        """Advance by one accepted step, shrinking ``h`` on rejection."""
        rejected = False
        while True:
            min_step = 16.0 * np.spacing(abs(self.t))
            if self.h < min_step:
                raise IntegrationError(
                    f"Step size underflow (h={self.h:.3e})", time=self.t
                )
            h = min(self.h, self.cfg.max_step)
            last = self.t + h >= self.t_bound
            if last:
                h = self.t_bound - self.t

            with np.errstate(over="ignore", invalid="ignore"):
                y_new, f_new, K = _stages(self.rhs, self.t, self.y, self.f, h)
                err = _error_norm(h * (_E @ K), self.y, y_new, self.cfg)
            if not math.isfinite(err) or not np.all(np.isfinite(y_new)):
                err = math.inf

            if err <= 1.0:
                factor = (
                    _MAX_FACTOR
                    if err == 0.0
                    else _SAFETY * err**-self.expo * self.err_old**self.cfg.beta
                )
                factor = min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
                if rejected:
                    factor = min(factor, 1.0)
                self.err_old = max(err, 1e-4)
                self.t_old, self.y_old, self.K = self.t, self.y, K
                self.t = self.t_bound if last else self.t + h
                self.y, self.f = y_new, f_new
                self.h = h * factor
                self.n_accepted += 1
                return

            factor = (
                _MIN_FACTOR
                if not math.isfinite(err)
                else max(_MIN_FACTOR, _SAFETY * err**-self.expo)
            )
            self.h = h * factor
            self.n_rejected += 1
            rejected = True

    def dense(self, t: RealArray) -> StateArray:
        """Interpolate the last accepted step at times in ``[t_old, t]``."""
        h = self.t - self.t_old
        x = np.clip((t - self.t_old) / h, 0.0, 1.0)
        powers = np.cumprod(np.repeat(x[:, None], 4, axis=1), axis=1)
        Q = self.K.T @ _P  # type: ignore[union-attr]
        return self.y_old + h * powers @ Q.T


def integrate(
    rhs: VectorField,
    y0: ArrayLike,
    t_end: float,
    cfg: IntegratorConfig | None = None,
    dt_sample: float = 0.01,
    sample_from: float = 0.0,
    component_names: tuple[str, ...] = (),
) -> Trajectory:
    """
    Integrate ``y' = rhs(t, y)`` from t = 0 and sample on a uniform grid.

    Args:
        rhs: Vector field ``rhs(t, y)``
        y0: Initial state at t = 0
        t_end: Final time (> 0)
        cfg: Step control (defaults to tolerances of 1e-10)
        dt_sample: Output spacing (> 0); samples sit at ``k * dt_sample``
        sample_from: Samples before this time are skipped (transient)
        component_names: Column labels for the returned trajectory

    Returns:
        Trajectory of the samples in ``[sample_from, t_end]``

    Raises:
        IntegrationError: On step-size underflow; carries the last accepted time
    """
    cfg = cfg or IntegratorConfig()
    t_end = validate_positive(t_end, "t_end")
    dt_sample = validate_positive(dt_sample, "dt_sample")
    sample_from = validate_non_negative(sample_from, "sample_from")
    y0 = validate_finite_array(y0, "y0", ndim=1)
    if sample_from > t_end:
        raise ValidationError("sample_from lies beyond t_end", "sample_from", sample_from)

    n_last = int(math.floor(t_end / dt_sample * (1.0 + 1e-12)))
    k_first = int(math.ceil(sample_from / dt_sample * (1.0 - 1e-12)))
    indices = np.arange(k_first, n_last + 1)
    times = dt_sample * indices
    states = np.empty((indices.size, y0.size))

    filled = 0
    if indices.size and indices[0] == 0:
        states[0] = y0
        filled = 1

    stepper = _Stepper(rhs, 0.0, y0.copy(), t_end, cfg)
    while filled < indices.size:
        stepper.step()
        if stepper.t >= t_end:
            stop = indices.size
        else:
            stop = int(np.searchsorted(times, stepper.t, side="right"))
        if stop > filled:
            states[filled:stop] = stepper.dense(times[filled:stop])
            filled = stop

    logger.debug(
        "Integration finished",
        extra={
            "t_end": t_end,
            "n_samples": indices.size,
            "n_accepted": stepper.n_accepted,
            "n_rejected": stepper.n_rejected,
        },
    )
    return Trajectory(times, states, dt_sample, component_names)


class AdvanceResult(NamedTuple):
    """End state of an unsampled integration and its step counts."""

    state: StateArray
    n_accepted: int
    n_rejected: int


def advance_with_stats(
    rhs: VectorField,
    y0: ArrayLike,
    t0: float,
    t1: float,
    cfg: IntegratorConfig | None = None,
) -> AdvanceResult:
    """
    Like :func:`advance`, also reporting accepted and rejected steps.

    Raises:
        IntegrationError: On step-size underflow
    """
    cfg = cfg or IntegratorConfig()
    y = np.asarray(y0, dtype=np.float64).copy()
    if t1 == t0:
        return AdvanceResult(y, 0, 0)
    if t1 < t0:
        raise ValidationError("Backward integration is not supported", "t1", t1)
    stepper = _Stepper(rhs, float(t0), y, float(t1), cfg)
    while stepper.t < t1:
        stepper.step()
    return AdvanceResult(stepper.y, stepper.n_accepted, stepper.n_rejected)


def advance(
    rhs: VectorField,
    y0: ArrayLike,
    t0: float,
    t1: float,
    cfg: IntegratorConfig | None = None,
) -> StateArray:
    """
    State at ``t1`` starting from ``y0`` at ``t0`` (no sampling).

    Raises:
        IntegrationError: On step-size underflow
    """
    return advance_with_stats(rhs, y0, t0, t1, cfg).state
