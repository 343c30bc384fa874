"""
Teacher-forced training and closed-loop forecasting.

Training drives the hybrid reservoir with the true normalized inputs,
stacks the post-washout reservoir states and fits the ridge readout against
the next-step targets. Forecasting feeds every prediction back as the next
input; the fed-back value is clamped to [0, 1] before encoding while the
emitted prediction is left untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
from typing import TYPE_CHECKING, Any

import numpy as np

from qrclab.constants import DEFAULT_RIDGE_LAMBDA
from qrclab.exceptions import ForecastError, IllConditionedError, ValidationError
from qrclab.forecasting.dataset import Normalization
from qrclab.forecasting.metrics import MetricConfig, VPTResult, vpt
from qrclab.quantum.evolution import EvolutionConfig
from qrclab.quantum.hamiltonian import HamiltonianSpec, HamiltonianTemplate
from qrclab.quantum.observables import (
    feature_length,
    multiplex_features,
    multiplex_features_batch,
)
from qrclab.reservoir.memory import (
    ReservoirConfig,
    ReservoirState,
    run_sequence,
    update,
)
from qrclab.reservoir.readout import ReadoutModel, TrainingSet, fit, predict

if TYPE_CHECKING:
    from qrclab.forecasting.dataset import DatasetSpec
    from qrclab.typing_extensions import RealArray

logger = logging.getLogger(__name__)

# column spread below which the reservoir carries no information
_ZERO_VARIATION = 1e-12


@dataclass(frozen=True, eq=False)
class ForecastModel:
    """
    Trained hybrid reservoir.

    Attributes:
        hamiltonian: Realized Hamiltonian (couplings drawn from ``seed``)
        evolution: Evolution times and initial state
        reservoir: Memory recursion parameters
        readout: Fitted ridge readout
        normalization: Map between physical and [0, 1] units
        final_state: Reservoir state after the last training input
        seed: Seed the couplings were drawn from
        train_rmse: RMS one-step residual on the training targets
        baseline_rmse: RMS residual of predicting the training-target mean
    """

    hamiltonian: HamiltonianSpec
    evolution: EvolutionConfig
    reservoir: ReservoirConfig
    readout: ReadoutModel
    normalization: Normalization
    final_state: RealArray
    seed: int | None = None
    train_rmse: float = float("nan")
    baseline_rmse: float = float("nan")

    def __post_init__(self) -> None:
        width = feature_length(self.hamiltonian.n_qubits, self.evolution.n_times)
        self.reservoir.spacing(width)
        state = np.array(self.final_state, dtype=np.float64)
        if state.shape != (self.reservoir.length,):
            raise ValidationError(
                "Final state does not match the reservoir length", "final_state", state.shape
            )
        if self.readout.n_features != self.reservoir.length:
            raise ValidationError(
                "Readout rows do not match the reservoir length",
                parameter="readout",
                value=self.readout.n_features,
            )
        if self.readout.n_outputs != self.hamiltonian.input_dim:
            raise ValidationError(
                "Readout outputs do not match the input dimension",
                parameter="readout",
                value=self.readout.n_outputs,
            )
        state.flags.writeable = False
        object.__setattr__(self, "final_state", state)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready export of every part of the model."""
        return {
            "hamiltonian": self.hamiltonian.to_dict(),
            "evolution": self.evolution.to_dict(),
            "reservoir": self.reservoir.to_dict(),
            "readout": self.readout.to_dict(),
            "normalization": self.normalization.to_dict(),
            "final_state": self.final_state.tolist(),
            "seed": self.seed,
            "train_rmse": self.train_rmse,
            "baseline_rmse": self.baseline_rmse,
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> ForecastModel:
        return cls(
            hamiltonian=HamiltonianSpec.from_dict(payload["hamiltonian"]),
            evolution=EvolutionConfig.from_dict(payload["evolution"]),
            reservoir=ReservoirConfig(**payload["reservoir"]),
            readout=ReadoutModel.from_dict(payload["readout"]),
            normalization=Normalization.from_dict(payload["normalization"]),
            final_state=np.asarray(payload["final_state"], dtype=np.float64),
            seed=payload.get("seed"),
            train_rmse=float(payload.get("train_rmse", float("nan"))),
            baseline_rmse=float(payload.get("baseline_rmse", float("nan"))),
        )


@dataclass(frozen=True, eq=False)
class ForecastResult:
    """
    Closed-loop forecast scored against the test segment.

    Attributes:
        predictions: Forecast in normalized units, shape ``(n_steps, d)``
        predictions_physical: Forecast mapped back to physical units
        truth: Ground truth in physical units
        vpt: Valid prediction time of the physical forecast
        times: Sample times of the forecast rows
    """

    predictions: RealArray
    predictions_physical: RealArray
    truth: RealArray
    vpt: VPTResult
    times: RealArray = field(default_factory=lambda: np.empty(0))


def train(
    data: DatasetSpec,
    h_spec: HamiltonianSpec | HamiltonianTemplate,
    evo: EvolutionConfig,
    res: ReservoirConfig,
    ridge_lambda: float = DEFAULT_RIDGE_LAMBDA,
    seed: int | None = None,
) -> ForecastModel:
    """
    Teacher-forced training of the readout.

    Args:
        data: Segmented dataset
        h_spec: Realized Hamiltonian, or a template whose couplings are drawn
            with ``sample_couplings(J, seed)``
        evo: Evolution times
        res: Reservoir recursion; its length must be a multiple of the
            multiplexed feature length
        ridge_lambda: Ridge regularization
        seed: Coupling seed (required with a template)

    Returns:
        Trained ``ForecastModel``

    Raises:
        ValidationError: On inconsistent dimensions
        IllConditionedError: If the reservoir carries no information or the
            ridge system is singular
    """
    if isinstance(h_spec, HamiltonianTemplate):
        if seed is None:
            raise ValidationError("A seed is required to realize the couplings", "seed")
        spec = h_spec.realize(data.dim, seed)
    else:
        spec = h_spec
    if spec.input_dim != data.dim:
        raise ValidationError(
            "Hamiltonian input dimension does not match the data",
            parameter="input_dim",
            value=(spec.input_dim, data.dim),
        )
    res.spacing(feature_length(spec.n_qubits, evo.n_times))

    inputs = np.clip(data.training_inputs(), 0.0, 1.0)
    features = multiplex_features_batch(spec, inputs, evo)
    states = run_sequence(features, res)
    design = states[data.n_washout :]
    targets = data.training_targets()

    if np.all(np.ptp(design, axis=0) <= _ZERO_VARIATION):
        raise IllConditionedError(
            "Reservoir states do not vary over the training segment"
        )

    readout = fit(TrainingSet(design, targets), ridge_lambda)
    residual = predict(readout, design) - targets
    train_rmse = float(np.sqrt(np.mean(residual**2)))
    baseline_rmse = float(np.sqrt(np.mean((targets - targets.mean(axis=0)) ** 2)))

    logger.info(
        "Readout trained",
        extra={
            "seed": seed,
            "n_train": design.shape[0],
            "train_rmse": train_rmse,
            "baseline_rmse": baseline_rmse,
        },
    )
    return ForecastModel(
        hamiltonian=spec,
        evolution=evo,
        reservoir=res,
        readout=readout,
        normalization=data.normalization,
        final_state=states[-1],
        seed=seed,
        train_rmse=train_rmse,
        baseline_rmse=baseline_rmse,
    )


def forecast(model: ForecastModel, n_steps: int) -> RealArray:
    """
    Closed-loop autoregressive forecast in normalized units.

    The first prediction is read from the final training state; every
    prediction is clamped to [0, 1], encoded and pushed through the
    recursion to produce the next one.

    Returns:
        Array of shape ``(n_steps, d)``

    Raises:
        ForecastError: On a non-finite prediction, with its 1-based step index
    """
    if n_steps < 0:
        raise ValidationError("Number of steps must be non-negative", "n_steps", n_steps)
    res = model.reservoir
    res.spacing(feature_length(model.hamiltonian.n_qubits, model.evolution.n_times))
    out = np.empty((n_steps, model.readout.weights.shape[1]))

    state = ReservoirState(model.final_state)
    for k in range(n_steps):
        y = predict(model.readout, state)
        if not np.all(np.isfinite(y)):
            raise ForecastError("Non-finite prediction", step=k + 1)
        out[k] = y
        if k + 1 < n_steps:
            m = multiplex_features(model.hamiltonian, np.clip(y, 0.0, 1.0), model.evolution)
            state = update(state, m, res)
    return out


def evaluate(
    model: ForecastModel,
    data: DatasetSpec,
    metric: MetricConfig | None = None,
    *,
    lyapunov_time: float | None = None,
    nonlinear_time: float | None = None,
) -> ForecastResult:
    """
    Forecast the test horizon of ``data`` and score it.

    The VPT is computed on physical values with sigmas from the test truth
    unless ``metric`` fixes them.
    """
    predictions = forecast(model, data.n_test)
    physical = model.normalization.denormalize(predictions)
    truth = data.test_truth()
    score = vpt(
        physical,
        truth,
        metric,
        dt_sample=data.dt_sample,
        lyapunov_time=lyapunov_time,
        nonlinear_time=nonlinear_time,
    )
    times = np.asarray(data.source.times[data.train_stop : data.train_stop + data.n_test])
    return ForecastResult(predictions, physical, truth, score, times)
