"""
Valid prediction time.

The VPT is the number of leading forecast steps for which the RMS over
components of the sigma-normalized deviation stays within ``epsilon``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, Any

import numpy as np

from qrclab.constants import DEFAULT_EPSILON
from qrclab.exceptions import ValidationError
from qrclab.validation.validators import validate_finite_array, validate_positive

if TYPE_CHECKING:
    from qrclab.typing_extensions import ArrayLike, RealArray


@dataclass(frozen=True, eq=False)
class MetricConfig:
    """
    VPT threshold and normalization.

    Attributes:
        epsilon: Error threshold (> 0)
        sigmas: Per-component standard deviations; ``None`` means they are
            computed from the ground truth passed to :func:`vpt`
    """

    epsilon: float = DEFAULT_EPSILON
    sigmas: RealArray | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon", validate_positive(self.epsilon, "epsilon"))
        if self.sigmas is not None:
            sigmas = validate_finite_array(self.sigmas, "sigmas", ndim=1)
            _check_sigmas(sigmas)
            object.__setattr__(self, "sigmas", sigmas)

    def resolve_sigmas(self, truth: RealArray) -> RealArray:
        if self.sigmas is not None:
            return self.sigmas
        sigmas = np.std(truth, axis=0)
        _check_sigmas(sigmas)
        return sigmas


def _check_sigmas(sigmas: RealArray) -> None:
    if np.any(sigmas <= 0.0):
        raise ValidationError(
            "Standard deviations must be positive",
            parameter="sigmas",
            value=sigmas.tolist(),
        )


@dataclass(frozen=True)
class VPTResult:
    """
    Valid prediction time in several units.

    Attributes:
        steps: Leading steps within the threshold
        time: ``steps * dt_sample`` (None without a sampling step)
        lyapunov_times: ``time / LT`` (None without a Lyapunov time)
        nonlinear_times: ``time / max T_k`` (None without nonlinear times)
        horizon: Number of steps evaluated
    """

    steps: int
    horizon: int
    time: float | None = None
    lyapunov_times: float | None = None
    nonlinear_times: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def normalized_error(
    pred: ArrayLike, truth: ArrayLike, sigmas: ArrayLike
) -> RealArray:
    """Per-step RMS over components of ``(pred - truth) / sigma``."""
    diff = (np.asarray(pred, dtype=np.float64) - np.asarray(truth, dtype=np.float64)) / (
        np.asarray(sigmas, dtype=np.float64)
    )
    return np.sqrt(np.mean(diff * diff, axis=1))


def vpt(
    pred: ArrayLike,
    truth: ArrayLike,
    cfg: MetricConfig | None = None,
    *,
    dt_sample: float | None = None,
    lyapunov_time: float | None = None,
    nonlinear_time: float | None = None,
) -> VPTResult:
    """
    Valid prediction time of a forecast against its ground truth.

    Args:
        pred: Forecast, shape ``(T, d)`` (a 1-D array is one component)
        truth: Ground truth of the same shape
        cfg: Threshold and sigmas
        dt_sample: Sampling step for the physical-time conversion
        lyapunov_time: Lyapunov time LT for the rescaled variant
        nonlinear_time: Longest nonlinear time for the rescaled variant

    Returns:
        ``VPTResult``

    Raises:
        ValidationError: On shape mismatch or a zero standard deviation
    """
    cfg = cfg or MetricConfig()
    p = np.asarray(pred, dtype=np.float64)
    t = np.asarray(truth, dtype=np.float64)
    if p.ndim == 1:
        p, t = p[:, None], t.reshape(-1, 1)
    if p.shape != t.shape:
        raise ValidationError(
            "Forecast and truth shapes differ", parameter="pred", value=(p.shape, t.shape)
        )

    horizon = p.shape[0]
    if horizon == 0:
        steps = 0
    else:
        errors = normalized_error(p, t, cfg.resolve_sigmas(t))
        exceeded = np.flatnonzero(~(errors <= cfg.epsilon))
        steps = int(exceeded[0]) if exceeded.size else horizon

    time = steps * dt_sample if dt_sample is not None else None
    return VPTResult(
        steps=steps,
        horizon=horizon,
        time=time,
        lyapunov_times=(
            time / lyapunov_time if time is not None and lyapunov_time else None
        ),
        nonlinear_times=(
            time / nonlinear_time if time is not None and nonlinear_time else None
        ),
    )
