"""
Linear ridge readout.

Weights solve the regularized normal equations

    (R^T R + lambda I) w = R^T y

for all target columns at once via a Cholesky factorization; no explicit
inverse is formed. One shared reservoir trajectory feeds every output
component.
"""

from __future__ import annotations

from dataclasses import dataclass
import json
import logging
from typing import TYPE_CHECKING, Any

import numpy as np
import scipy.linalg

from qrclab.constants import DEFAULT_RESIDUAL_TOLERANCE, DEFAULT_RIDGE_LAMBDA
from qrclab.exceptions import IllConditionedError, ValidationError
from qrclab.validation.validators import validate_finite_array, validate_non_negative

if TYPE_CHECKING:
    from qrclab.reservoir.memory import ReservoirState
    from qrclab.typing_extensions import ArrayLike, DesignMatrix, RealArray

logger = logging.getLogger(__name__)

_FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """Design matrix R (N_tr x l_r) and targets Y (N_tr x d_out)."""

    design: DesignMatrix
    targets: RealArray

    def __post_init__(self) -> None:
        design = validate_finite_array(self.design, "design", ndim=2)
        targets = np.asarray(self.targets, dtype=np.float64)
        if targets.ndim == 1:
            targets = targets[:, None]
        targets = validate_finite_array(targets, "targets", ndim=2)
        if design.shape[0] != targets.shape[0]:
            raise ValidationError(
                "Design and target row counts differ",
                parameter="targets",
                value=(design.shape[0], targets.shape[0]),
            )
        if design.shape[0] < 1:
            raise ValidationError("At least one training row is required", "design")
        object.__setattr__(self, "design", design)
        object.__setattr__(self, "targets", targets)


@dataclass(frozen=True, eq=False)
class ReadoutModel:
    """
    Fitted readout.

    Attributes:
        weights: Matrix of shape ``(l_r, d_out)``, one column per output
        ridge_lambda: Regularization used for the fit
        relative_residual: ``||A w - b|| / ||b||`` of the solved normal equations
    """

    weights: RealArray
    ridge_lambda: float
    relative_residual: float = 0.0

    def __post_init__(self) -> None:
        weights = validate_finite_array(self.weights, "weights", ndim=2)
        weights.flags.writeable = False
        object.__setattr__(self, "weights", weights)
        object.__setattr__(
            self, "ridge_lambda", validate_non_negative(self.ridge_lambda, "ridge_lambda")
        )

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[0])

    @property
    def n_outputs(self) -> int:
        return int(self.weights.shape[1])

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready export: row-major weights plus layout metadata."""
        return {
            "format_version": _FORMAT_VERSION,
            "layout": {
                "rows": self.n_features,
                "cols": self.n_outputs,
                "order": "row-major",
                "dtype": "float64",
            },
            "ridge_lambda": self.ridge_lambda,
            "relative_residual": self.relative_residual,
            "weights": self.weights.ravel(order="C").tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> ReadoutModel:
        """Rebuild a model from :meth:`to_dict` output."""
        try:
            layout = payload["layout"]
            weights = np.asarray(payload["weights"], dtype=np.float64).reshape(
                int(layout["rows"]), int(layout["cols"])
            )
            return cls(
                weights=weights,
                ridge_lambda=float(payload["ridge_lambda"]),
                relative_residual=float(payload.get("relative_residual", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"Malformed readout payload: {e}", "payload") from e

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> ReadoutModel:
        return cls.from_dict(json.loads(text))


def fit(train: TrainingSet, ridge_lambda: float = DEFAULT_RIDGE_LAMBDA) -> ReadoutModel:
    """
    Solve the ridge normal equations for every target column.

    Args:
        train: Stacked reservoir rows and targets
        ridge_lambda: Regularization lambda (>= 0)

    Returns:
        Fitted ``ReadoutModel``

    Raises:
        IllConditionedError: If the system is singular or numerically
            non-invertible (only possible in practice when lambda = 0)
    """
    ridge_lambda = validate_non_negative(ridge_lambda, "ridge_lambda")
    design, targets = train.design, train.targets

    gram = design.T @ design
    if ridge_lambda > 0.0:
        gram[np.diag_indices_from(gram)] += ridge_lambda
    rhs = design.T @ targets

    if ridge_lambda == 0.0:
        condition = float(np.linalg.cond(gram))
        if not np.isfinite(condition) or condition * np.finfo(np.float64).eps > 1.0:
            raise IllConditionedError(
                "Normal equations are singular at lambda = 0", condition=condition
            )

    try:
        factor = scipy.linalg.cho_factor(gram, lower=True, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise IllConditionedError(
            "Normal equations are not positive definite"
        ) from e

    weights = scipy.linalg.cho_solve(factor, rhs, check_finite=False)
    rhs_norm = float(np.linalg.norm(rhs))
    residual = _relative_residual(gram, weights, rhs, rhs_norm)

    if residual > DEFAULT_RESIDUAL_TOLERANCE:
        # one step of iterative refinement
        weights = weights + scipy.linalg.cho_solve(
            factor, rhs - gram @ weights, check_finite=False
        )
        residual = _relative_residual(gram, weights, rhs, rhs_norm)
        if residual > DEFAULT_RESIDUAL_TOLERANCE:
            logger.warning(
                "Ridge residual above tolerance after refinement",
                extra={"relative_residual": residual, "ridge_lambda": ridge_lambda},
            )

    if not np.all(np.isfinite(weights)):
        raise IllConditionedError("Ridge solve produced non-finite weights")

    logger.debug(
        "Fitted readout",
        extra={
            "n_rows": design.shape[0],
            "n_features": design.shape[1],
            "n_outputs": targets.shape[1],
            "relative_residual": residual,
        },
    )
    return ReadoutModel(weights, ridge_lambda, residual)


def _relative_residual(
    gram: np.ndarray, weights: np.ndarray, rhs: np.ndarray, rhs_norm: float
) -> float:
    if rhs_norm == 0.0:
        return float(np.linalg.norm(gram @ weights))
    return float(np.linalg.norm(gram @ weights - rhs) / rhs_norm)


def predict(model: ReadoutModel, r: ReservoirState | ArrayLike) -> RealArray:
    """
    Apply the readout: ``y_hat = W^T r``.

    Accepts a single reservoir vector (returns length ``d_out``) or a matrix
    of stacked rows (returns ``(K, d_out)``).

    Raises:
        ValidationError: If the reservoir length differs from the weight rows
    """
    values = r.values if hasattr(r, "values") else np.asarray(r, dtype=np.float64)
    if values.shape[-1] != model.n_features:
        raise ValidationError(
            f"Dimension mismatch: expected reservoir length {model.n_features}",
            parameter="r",
            value=values.shape,
        )
    return values @ model.weights
