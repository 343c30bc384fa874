"""
Run configuration schema for the command-line interface.

A ``RunConfig`` is a tree of small settings dataclasses. Every field has a
default; a JSON document overrides any subset of them and unknown keys are
rejected. Fields whose default depends on the chosen system are ``None`` in
the schema and filled in by :meth:`RunConfig.resolved`.

Precedence: built-in defaults < JSON config file < command-line flags.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, is_dataclass, replace
from functools import cache
from pathlib import Path
import types
from typing import Any, Union, get_args, get_origin, get_type_hints

from qrclab.constants import (
    BEST_COUPLING,
    BEST_TRANSVERSE_FIELD,
    DEFAULT_COUPLING_GRID,
    DEFAULT_EPSILON,
    DEFAULT_GAMMA_GRID,
    DEFAULT_LENGTH_MULTIPLE,
    DEFAULT_N_QUBITS,
    DEFAULT_N_REALIZATIONS,
    DEFAULT_N_TRAIN,
    DEFAULT_RIDGE_LAMBDA,
    DEFAULT_SHIFT,
    DEFAULT_TIME_GRID,
    DEFAULT_TOLERANCE,
    DEFAULT_TRANSIENT,
    DEFAULT_WASHOUT,
    LORENZ_BETA,
    LORENZ_DT_SAMPLE,
    LORENZ_EVOLUTION_TIMES,
    LORENZ_N_TEST,
    LORENZ_RHO,
    LORENZ_SIGMA,
    NS5_DT_SAMPLE,
    NS5_EVOLUTION_TIMES,
    NS5_N_TEST,
)
from qrclab.exceptions import ConfigError, QRCLabError
from qrclab.validation.validators import validate_choice

SYSTEMS: tuple[str, ...] = ("ns5", "lorenz63")


@dataclass
class SystemSettings:
    """
    Benchmark system and its parameters.

    ``nonlinear_scale`` multiplies the NS5 quadratic terms; 1.0 keeps the
    literal coefficients and sqrt(5) selects the classical normalisation.
    """

    name: str = "ns5"
    forcing: float = 33.0
    variant: str = "conserving"
    nonlinear_scale: float = 1.0
    dissipative: bool = True
    sigma: float = LORENZ_SIGMA
    rho: float = LORENZ_RHO
    beta: float = LORENZ_BETA

    def __post_init__(self) -> None:
        validate_choice(self.name, SYSTEMS, "system.name")
        validate_choice(self.variant, ("as_written", "conserving"), "system.variant")

    def build(self) -> Any:
        from qrclab.dynamics.systems import make_system

        return make_system(
            self.name,
            forcing=self.forcing,
            variant=self.variant,
            nonlinear_scale=self.nonlinear_scale,
            dissipative=self.dissipative,
            sigma=self.sigma,
            rho=self.rho,
            beta=self.beta,
        )


@dataclass
class IntegratorSettings:
    """
    Step control and sampling of generated trajectories.

    ``n_samples`` of ``None`` generates exactly the rows the dataset needs.
    """

    abs_tol: float = DEFAULT_TOLERANCE
    rel_tol: float = DEFAULT_TOLERANCE
    max_step: float = 1.0
    initial_step: float = 1e-3
    beta: float = 0.04
    dt_sample: float | None = None
    transient: float = DEFAULT_TRANSIENT
    n_samples: int | None = None
    initial_state: list[float] | None = None

    def build(self) -> Any:
        from qrclab.dynamics.integrator import IntegratorConfig

        return IntegratorConfig(
            self.abs_tol, self.rel_tol, self.max_step, self.initial_step, self.beta
        )


@dataclass
class DatasetSettings:
    """Segment lengths; ``trajectory`` loads a CSV instead of integrating."""

    n_washout: int = DEFAULT_WASHOUT
    n_train: int = DEFAULT_N_TRAIN
    n_test: int | None = None
    trajectory: str | None = None


@dataclass
class QuantumSettings:
    """Register, Hamiltonian amplitudes and evolution times."""

    n_qubits: int = DEFAULT_N_QUBITS
    coupling: float = BEST_COUPLING
    transverse_field: float = BEST_TRANSVERSE_FIELD
    input_scale: float = 1.0
    times: list[float] | None = None


@dataclass
class ReservoirSettings:
    gamma: float = 0.8
    shift: int = DEFAULT_SHIFT
    length_multiple: int = DEFAULT_LENGTH_MULTIPLE


@dataclass
class ReadoutSettings:
    ridge_lambda: float = DEFAULT_RIDGE_LAMBDA


@dataclass
class MetricSettings:
    """
    VPT threshold and time scales for the rescaled variants.

    ``lyapunov_file`` points to the ``lyapunov.json`` written by the
    ``lyapunov`` command; an explicit ``lyapunov_time`` takes precedence.
    """

    epsilon: float = DEFAULT_EPSILON
    lyapunov_time: float | None = None
    lyapunov_file: str | None = None
    nonlinear_times: bool = True


@dataclass
class SweepSettings:
    """Grid axes, realizations and heatmap export."""

    gamma_values: list[float] = field(default_factory=lambda: list(DEFAULT_GAMMA_GRID))
    j_values: list[float] = field(default_factory=lambda: list(DEFAULT_COUPLING_GRID))
    h_values: list[float] = field(default_factory=lambda: list(DEFAULT_COUPLING_GRID))
    dt1_values: list[float] = field(default_factory=lambda: list(DEFAULT_TIME_GRID))
    dt2_values: list[float] = field(default_factory=lambda: list(DEFAULT_TIME_GRID))
    n_realizations: int = DEFAULT_N_REALIZATIONS
    multiplexed: bool = True
    axes: list[str] = field(default_factory=lambda: ["dt1", "dt2"])
    heatmap_reduce: str = "slice"
    fixed: dict[str, float | None] | None = None


@dataclass
class BifurcationSettings:
    """Forcing range (or explicit values) and observation window."""

    f_min: float = 22.0
    f_max: float = 35.0
    n_values: int = 131
    f_values: list[float] | None = None
    transient: float = DEFAULT_TRANSIENT
    window: float = 200.0

    def forcing_values(self) -> list[float]:
        if self.f_values is not None:
            return [float(f) for f in self.f_values]
        import numpy as np

        return np.linspace(self.f_min, self.f_max, self.n_values).tolist()


@dataclass
class LyapunovSettings:
    horizon: float = 2000.0
    renorm_dt: float = 0.5
    d0: float = 1e-8
    transient: float = DEFAULT_TRANSIENT


@dataclass
class RunConfig:
    """Complete declarative description of a run."""

    system: SystemSettings = field(default_factory=SystemSettings)
    integrator: IntegratorSettings = field(default_factory=IntegratorSettings)
    dataset: DatasetSettings = field(default_factory=DatasetSettings)
    quantum: QuantumSettings = field(default_factory=QuantumSettings)
    reservoir: ReservoirSettings = field(default_factory=ReservoirSettings)
    readout: ReadoutSettings = field(default_factory=ReadoutSettings)
    metric: MetricSettings = field(default_factory=MetricSettings)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    bifurcation: BifurcationSettings = field(default_factory=BifurcationSettings)
    lyapunov: LyapunovSettings = field(default_factory=LyapunovSettings)
    seed: int = 0
    workers: int = 1
    output_dir: str = "qrclab-output"

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> RunConfig:
        """
        Build a config from a (partial) JSON document.

        A run manifest is accepted as well; its ``config`` entry is used.

        Raises:
            ConfigError: On unknown keys or values of the wrong kind
        """
        if not isinstance(payload, dict):
            raise ConfigError("Configuration must be a JSON object")
        if "manifest_version" in payload and "config" in payload:
            payload = payload["config"]
        return _build(cls, payload, "")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def resolved(self) -> RunConfig:
        """Copy with every system-dependent default filled in."""
        ns5 = self.system.name == "ns5"
        dt_sample = self.integrator.dt_sample or (NS5_DT_SAMPLE if ns5 else LORENZ_DT_SAMPLE)
        n_test = (
            self.dataset.n_test
            if self.dataset.n_test is not None
            else (NS5_N_TEST if ns5 else LORENZ_N_TEST)
        )
        n_samples = self.integrator.n_samples or (
            self.dataset.n_washout + self.dataset.n_train + max(n_test, 1)
        )
        times = self.quantum.times or list(NS5_EVOLUTION_TIMES if ns5 else LORENZ_EVOLUTION_TIMES)
        return replace(
            self,
            integrator=replace(self.integrator, dt_sample=dt_sample, n_samples=n_samples),
            dataset=replace(self.dataset, n_test=n_test),
            quantum=replace(self.quantum, times=[float(t) for t in times]),
        )

    def with_overrides(self, **overrides: Any) -> RunConfig:
        """
        Apply command-line overrides; ``None`` values are ignored.

        Recognized keys: ``system``, ``forcing``, ``variant``,
        ``nonlinear_scale``, ``seed``, ``workers``, ``output_dir``, ``axes``.
        """
        config = self
        system = config.system
        if overrides.get("system") is not None:
            system = replace(system, name=overrides["system"])
        if overrides.get("forcing") is not None:
            system = replace(system, forcing=float(overrides["forcing"]))
        if overrides.get("variant") is not None:
            system = replace(system, variant=overrides["variant"])
        if overrides.get("nonlinear_scale") is not None:
            system = replace(system, nonlinear_scale=float(overrides["nonlinear_scale"]))
        config = replace(config, system=system)
        for key in ("seed", "workers", "output_dir"):
            if overrides.get(key) is not None:
                config = replace(config, **{key: overrides[key]})
        if overrides.get("axes") is not None:
            config = replace(config, sweep=replace(config.sweep, axes=list(overrides["axes"])))
        return config


def _build(cls: type, payload: dict[str, Any], prefix: str) -> Any:
    hints = _field_types(cls)
    known = {f.name for f in fields(cls)}
    kwargs: dict[str, Any] = {}
    for key, value in payload.items():
        path = f"{prefix}{key}"
        if key not in known:
            raise ConfigError("Unknown configuration key", path)
        hint = hints[key]
        if is_dataclass(hint):
            if not isinstance(value, dict):
                raise ConfigError("Expected an object", path)
            kwargs[key] = _build(hint, value, f"{path}.")
        else:
            kwargs[key] = _check_kind(value, hint, path)
    try:
        return cls(**kwargs)
    except QRCLabError as e:
        raise ConfigError(str(e), prefix.rstrip(".") or None) from e


@cache
def _field_types(cls: type) -> dict[str, Any]:
    return get_type_hints(cls)


def _type_name(hint: Any) -> str:
    origin = get_origin(hint)
    if origin in (Union, types.UnionType):
        return " or ".join(_type_name(a) for a in get_args(hint) if a is not type(None))
    return getattr(origin or hint, "__name__", str(hint))


def _check_kind(value: Any, hint: Any, path: str) -> Any:
    """
    Check a JSON value against a field annotation.

    Integers are promoted to float; ``None`` is accepted only by optional
    fields. List and dict entries are checked against their item types.
    """
    origin = get_origin(hint)
    args = get_args(hint)

    if origin in (Union, types.UnionType):
        if value is None and type(None) in args:
            return None
        options = [a for a in args if a is not type(None)]
        for option in options:
            try:
                return _check_kind(value, option, path)
            except ConfigError:
                continue
        raise _kind_error(hint, value, path)

    if hint is bool:
        ok = isinstance(value, bool)
    elif hint is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif hint is float:
        ok = isinstance(value, int | float) and not isinstance(value, bool)
        value = float(value) if ok else value
    elif hint is str:
        ok = isinstance(value, str)
    elif origin is list:
        if not isinstance(value, list):
            raise _kind_error(hint, value, path)
        return [_check_kind(item, args[0], path) for item in value] if args else value
    elif origin is dict:
        if not isinstance(value, dict) or not all(isinstance(k, str) for k in value):
            raise _kind_error(hint, value, path)
        return {k: _check_kind(v, args[1], path) for k, v in value.items()} if args else value
    else:
        ok = True
    if not ok:
        raise _kind_error(hint, value, path)
    return value


def _kind_error(hint: Any, value: Any, path: str) -> ConfigError:
    return ConfigError(
        f"Expected a value of type {_type_name(hint)}, got {type(value).__name__}",
        path,
    )


def load_run_config(path: str | Path | None) -> RunConfig:
    """
    Load a JSON config (or manifest); ``None`` returns the defaults.

    Raises:
        DataFileError: If the file cannot be read
        ConfigError: If its content does not match the schema
    """
    if path is None:
        return RunConfig()
    from qrclab.io.file_operations import read_json

    return RunConfig.from_dict(read_json(path))
