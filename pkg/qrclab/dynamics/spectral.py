"""
Characteristic time scales from power spectra.

The nonlinear time of a component is taken as the period of the dominant
peak of its periodogram (mean removed, Hann window, zero frequency
excluded).
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from scipy.signal import periodogram

from qrclab.constants import MIN_SPECTRAL_SAMPLES
from qrclab.exceptions import SpectralError, ValidationError

if TYPE_CHECKING:
    from qrclab.dynamics.integrator import Trajectory
    from qrclab.typing_extensions import RealArray


def dominant_period(
    series: RealArray, dt_sample: float, component: str | None = None
) -> float:
    """Period of the strongest non-zero-frequency peak of one series."""
    x = np.asarray(series, dtype=np.float64)
    if np.ptp(x) == 0.0:
        raise SpectralError("Constant series has no dominant period", component)
    freqs, power = periodogram(
        x, fs=1.0 / dt_sample, window="hann", detrend="constant", scaling="spectrum"
    )
    freqs, power = freqs[1:], power[1:]
    if power.size == 0 or not np.any(power > 0.0):
        raise SpectralError("Flat power spectrum", component)
    return float(1.0 / freqs[int(np.argmax(power))])


def nonlinear_times(
    traj: Trajectory, min_samples: int = MIN_SPECTRAL_SAMPLES
) -> RealArray:
    """
    Dominant spectral period of every component.

    Args:
        traj: Uniformly sampled trajectory
        min_samples: Shortest series accepted for spectral estimation

    Returns:
        One period T per component, in the trajectory's time units

    Raises:
        ValidationError: If the trajectory is shorter than ``min_samples``
        SpectralError: If a component is constant
    """
    if traj.n_steps < min_samples:
        raise ValidationError(
            f"Spectral estimation needs at least {min_samples} samples",
            parameter="traj",
            value=traj.n_steps,
        )
    return np.array(
        [
            dominant_period(traj.states[:, i], traj.dt_sample, name)
            for i, name in enumerate(traj.component_names)
        ]
    )
