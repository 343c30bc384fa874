"""
Dataset preparation: segment boundaries and [0, 1] normalization.

A trajectory is split into consecutive washout, training and test rows. The
affine per-component map onto [0, 1] is fitted on the washout and training
rows only and then applied to every row.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
from typing import TYPE_CHECKING, Any

import numpy as np

from qrclab.constants import DEFAULT_N_TRAIN, DEFAULT_WASHOUT
from qrclab.exceptions import ValidationError
from qrclab.validation.validators import validate_positive_int

if TYPE_CHECKING:
    from qrclab.dynamics.integrator import Trajectory
    from qrclab.typing_extensions import ArrayLike, RealArray

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Normalization:
    """Per-component affine map ``x -> (x - minimum) / (maximum - minimum)``."""

    minimum: RealArray
    maximum: RealArray

    def __post_init__(self) -> None:
        lo = np.array(self.minimum, dtype=np.float64)
        hi = np.array(self.maximum, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValidationError("Normalization bounds must be matching vectors", "minimum")
        if np.any(~(hi > lo)):
            raise ValidationError(
                "Constant component cannot be normalized",
                parameter="component",
                value=np.flatnonzero(~(hi > lo)).tolist(),
            )
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "minimum", lo)
        object.__setattr__(self, "maximum", hi)

    @classmethod
    def fit(cls, values: ArrayLike) -> Normalization:
        """Bounds from the column-wise extremes of ``values``."""
        x = np.asarray(values, dtype=np.float64)
        return cls(x.min(axis=0), x.max(axis=0))

    @property
    def span(self) -> RealArray:
        return self.maximum - self.minimum

    def normalize(self, values: ArrayLike) -> RealArray:
        return (np.asarray(values, dtype=np.float64) - self.minimum) / self.span

    def denormalize(self, values: ArrayLike) -> RealArray:
        return np.asarray(values, dtype=np.float64) * self.span + self.minimum

    def to_dict(self) -> dict[str, Any]:
        return {"minimum": self.minimum.tolist(), "maximum": self.maximum.tolist()}

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> Normalization:
        return cls(np.asarray(payload["minimum"]), np.asarray(payload["maximum"]))


@dataclass(frozen=True, eq=False)
class DatasetSpec:
    """
    Segmented and normalized trajectory.

    Rows ``[0, n_washout)`` warm up the reservoir, rows
    ``[n_washout, n_washout + n_train)`` are teacher-forced training inputs and
    the ``n_test`` rows starting at ``n_washout + n_train`` are the forecast
    ground truth. The last training target is the first test row.
    """

    source: Trajectory
    n_train: int
    n_washout: int
    n_test: int
    normalization: Normalization

    @property
    def dim(self) -> int:
        return self.source.dim

    @property
    def dt_sample(self) -> float:
        return self.source.dt_sample

    @property
    def train_stop(self) -> int:
        """Index of the first row after the training inputs."""
        return self.n_washout + self.n_train

    def normalize(self, values: ArrayLike) -> RealArray:
        return self.normalization.normalize(values)

    def denormalize(self, values: ArrayLike) -> RealArray:
        return self.normalization.denormalize(values)

    @property
    def normalized(self) -> RealArray:
        """Every row of the source, normalized."""
        return self.normalize(self.source.states)

    def training_inputs(self) -> RealArray:
        """Normalized washout and training inputs (rows ``[0, train_stop)``)."""
        return self.normalize(self.source.states[: self.train_stop])

    def training_targets(self) -> RealArray:
        """Next-step targets s_{k+1} of every post-washout training input."""
        return self.normalize(self.source.states[self.n_washout + 1 : self.train_stop + 1])

    def test_truth(self) -> RealArray:
        """Ground truth of the forecast horizon, in physical units."""
        return np.array(self.source.states[self.train_stop : self.train_stop + self.n_test])

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_washout": self.n_washout,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "dt_sample": self.dt_sample,
            "normalization": self.normalization.to_dict(),
        }


def make_dataset(
    traj: Trajectory,
    n_train: int = DEFAULT_N_TRAIN,
    n_washout: int = DEFAULT_WASHOUT,
    n_test: int = 0,
) -> DatasetSpec:
    """
    Split a trajectory and fit the [0, 1] normalization.

    Args:
        traj: Uniformly sampled source
        n_train: Training inputs N_tr (>= 1)
        n_washout: Washout inputs (>= 0)
        n_test: Forecast horizon (>= 0)

    Returns:
        ``DatasetSpec`` with the fitted normalization

    Raises:
        ValidationError: If the segments do not fit or a component is constant
            over the washout and training rows
    """
    n_train = validate_positive_int(n_train, "n_train")
    n_washout = validate_positive_int(n_washout, "n_washout", minimum=0)
    n_test = validate_positive_int(n_test, "n_test", minimum=0)
    # one extra row is needed for the last training target when n_test == 0
    required = n_washout + n_train + max(n_test, 1)
    if required > traj.n_steps:
        raise ValidationError(
            "Segments exceed trajectory length",
            parameter="n_steps",
            value=(required, traj.n_steps),
        )

    normalization = Normalization.fit(traj.states[: n_washout + n_train])
    logger.debug(
        "Dataset prepared",
        extra={"n_washout": n_washout, "n_train": n_train, "n_test": n_test},
    )
    return DatasetSpec(traj, n_train, n_washout, n_test, normalization)
