"""
Classical shift-memory reservoir.

The reservoir state follows the linear recursion

    r_k = gamma * S_{n_S} r_{k-1} + B_{l_r} m^k,

where ``S_n`` is the cyclic permutation ``(S_n r)_i = r_{(i+n) mod l_r}`` and
``B_{l_r}`` spreads the feature vector uniformly over ``l_r`` slots by
interleaving zeros (entry ``m_i`` lands at slot ``q*i`` with ``q = l_r/len(m)``).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np

from qrclab.constants import DEFAULT_LENGTH_MULTIPLE, DEFAULT_SHIFT
from qrclab.exceptions import ValidationError
from qrclab.quantum.observables import FeatureVector
from qrclab.validation.validators import (
    validate_finite_array,
    validate_positive_int,
    validate_unit_interval,
)

if TYPE_CHECKING:
    from qrclab.typing_extensions import ArrayLike, DesignMatrix, RealArray


@dataclass(frozen=True)
class ReservoirConfig:
    """
    Parameters of the memory recursion.

    Attributes:
        gamma: Memory retention in [0, 1]
        shift: Signed cyclic shift n_S
        length: Reservoir length l_r (an integer multiple of the feature length)
    """

    gamma: float
    shift: int = DEFAULT_SHIFT
    length: int = 270

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", validate_unit_interval(self.gamma, "gamma"))
        if isinstance(self.shift, bool) or not isinstance(self.shift, int | np.integer):
            raise ValidationError("Shift must be an integer", "shift", self.shift)
        object.__setattr__(self, "shift", int(self.shift))
        object.__setattr__(self, "length", validate_positive_int(self.length, "length"))

    @classmethod
    def for_features(
        cls,
        feature_length: int,
        gamma: float,
        shift: int = DEFAULT_SHIFT,
        multiple: int = DEFAULT_LENGTH_MULTIPLE,
    ) -> ReservoirConfig:
        """Config with ``l_r = multiple * feature_length``."""
        multiple = validate_positive_int(multiple, "multiple")
        return cls(gamma=gamma, shift=shift, length=multiple * feature_length)

    def spacing(self, feature_length: int) -> int:
        """Embedding spacing q for features of the given length."""
        if feature_length < 1 or self.length % feature_length:
            raise ValidationError(
                f"Reservoir length {self.length} is not a multiple of the feature length",
                parameter="feature_length",
                value=feature_length,
            )
        return self.length // feature_length

    def to_dict(self) -> dict[str, Any]:
        return {"gamma": self.gamma, "shift": self.shift, "length": self.length}


@dataclass(frozen=True, eq=False)
class ReservoirState:
    """Reservoir vector r_k of length l_r with finite entries."""

    values: RealArray

    def __post_init__(self) -> None:
        values = validate_finite_array(self.values, "reservoir_state", ndim=1)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, length: int) -> ReservoirState:
        return cls(np.zeros(length))

    def __len__(self) -> int:
        return int(self.values.size)


def _as_values(m: FeatureVector | ArrayLike) -> RealArray:
    if isinstance(m, FeatureVector):
        return m.values
    return np.asarray(m, dtype=np.float64)


def embed(m: FeatureVector | ArrayLike, l_r: int) -> RealArray:
    """
    Spread ``m`` over ``l_r`` slots, placing ``m_i`` at slot ``q*i``.

    Raises:
        ValidationError: If ``l_r`` is not a positive multiple of ``len(m)``
    """
    values = _as_values(m)
    if values.ndim != 1 or values.size == 0 or l_r < values.size or l_r % values.size:
        raise ValidationError(
            f"Reservoir length must be a multiple of the feature length {values.size}",
            parameter="l_r",
            value=l_r,
        )
    out = np.zeros(l_r, dtype=np.float64)
    out[:: l_r // values.size] = values
    return out


def shift(r: ArrayLike, n: int) -> RealArray:
    """Cyclic shift with ``out_i = r_{(i+n) mod len(r)}``; ``n`` may be negative."""
    return np.roll(np.asarray(r, dtype=np.float64), -int(n))


def update(
    prev: ReservoirState, m: FeatureVector | ArrayLike, cfg: ReservoirConfig
) -> ReservoirState:
    """
    One step of the memory recursion.

    Raises:
        ValidationError: On length mismatch between ``prev``, ``m`` and ``cfg``
    """
    if len(prev) != cfg.length:
        raise ValidationError(
            f"Dimension mismatch: reservoir state must have length {cfg.length}",
            parameter="prev",
            value=len(prev),
        )
    values = _as_values(m)
    cfg.spacing(values.size)
    return ReservoirState(cfg.gamma * shift(prev.values, cfg.shift) + embed(values, cfg.length))


def run_sequence(
    features: Sequence[FeatureVector | ArrayLike] | np.ndarray,
    cfg: ReservoirConfig,
    r0: ReservoirState | None = None,
) -> DesignMatrix:
    """
    Iterate :func:`update` over a feature sequence.

    Args:
        features: Feature vectors (or a ``(K, F)`` matrix), all of equal length
        cfg: Reservoir parameters
        r0: Initial state (default: zero vector)

    Returns:
        Matrix of shape ``(K, l_r)`` whose row k is r_k
    """
    rows = [_as_values(m) for m in features]
    if not rows:
        return np.zeros((0, cfg.length))
    width = rows[0].size
    if any(row.size != width for row in rows):
        raise ValidationError("All feature vectors must have the same length", "features")

    cfg.spacing(width)
    state = ReservoirState.zeros(cfg.length) if r0 is None else r0
    if len(state) != cfg.length:
        raise ValidationError(
            f"Dimension mismatch: r0 must have length {cfg.length}",
            parameter="r0",
            value=len(state),
        )

    out = np.empty((len(rows), cfg.length))
    for k, row in enumerate(rows):
        state = update(state, row, cfg)
        out[k] = state.values
    return out
