"""
Pauli feature extraction and temporal multiplexing.

A single measurement block holds the 3N single-site expectations <sigma_i^a>
(axis-major, site-minor) followed by the 3N(N-1)/2 same-axis pair
correlations <sigma_i^a sigma_j^a> (i < j, lexicographic). A multiplexed
feature vector concatenates one block per evolution time, in the order of
``EvolutionConfig.times``; every block restarts from the same initial state.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
from typing import TYPE_CHECKING

import numpy as np

from qrclab.backend import ops
from qrclab.constants import IMAGINARY_TOLERANCE, MEASUREMENT_NORM_TOLERANCE
from qrclab.exceptions import StateNormError, ValidationError
from qrclab.quantum.evolution import (
    Eigensystem,
    EvolutionConfig,
    StateVector,
    _evolve_amplitudes,
    diagonalize,
)
from qrclab.quantum.hamiltonian import (
    HamiltonianSpec,
    build_hamiltonian,
    build_hamiltonian_stack,
    observable_stack,
)
from qrclab.quantum.kernels import _get_measure_kernel
from qrclab.validation.validators import validate_positive_int

if TYPE_CHECKING:
    from qrclab.typing_extensions import AmplitudeArray, ArrayLike, FeatureArray

logger = logging.getLogger(__name__)


def block_length(n_qubits: int) -> int:
    """Entries per measurement block: 3N + 3N(N-1)/2."""
    return 3 * n_qubits + 3 * n_qubits * (n_qubits - 1) // 2


def feature_length(n_qubits: int, n_times: int = 1) -> int:
    """Length of a multiplexed feature vector, ``L * block_length(N)``."""
    return n_times * block_length(n_qubits)


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Real Pauli expectations in canonical layout, possibly multiplexed."""

    values: FeatureArray
    n_qubits: int
    n_blocks: int = 1

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        expected = feature_length(self.n_qubits, self.n_blocks)
        if values.shape != (expected,):
            raise ValidationError(
                f"Feature vector must have length {expected}",
                parameter="values",
                value=values.shape,
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)

    def blocks(self) -> FeatureArray:
        """View of the values with shape ``(n_blocks, block_length)``."""
        return self.values.reshape(self.n_blocks, -1)


def _measure_amplitudes(amplitudes: AmplitudeArray, n_qubits: int) -> FeatureArray:
    kernel = _get_measure_kernel()
    values, imag_residual = kernel(amplitudes, observable_stack(n_qubits))
    imag_residual = float(imag_residual)
    if imag_residual > IMAGINARY_TOLERANCE:
        raise ValidationError(
            "Pauli expectation has a non-negligible imaginary part",
            parameter="imaginary_residual",
            value=imag_residual,
        )
    # Round-off can push |<P>| a few ulps past 1.
    return np.clip(np.asarray(values, dtype=np.float64), -1.0, 1.0)


def measure_features(psi: StateVector | ArrayLike) -> FeatureVector:
    """
    Measure all single-site and same-axis pair Pauli expectations.

    Args:
        psi: Normalized state (a ``StateVector`` or raw amplitudes)

    Returns:
        Single-block ``FeatureVector`` (45 entries for N = 5)

    Raises:
        StateNormError: If the norm deviates from one by more than 1e-8
    """
    amplitudes = (
        psi.amplitudes
        if isinstance(psi, StateVector)
        else np.asarray(psi, dtype=np.complex128)
    )
    norm = float(np.linalg.norm(amplitudes))
    if abs(norm - 1.0) > MEASUREMENT_NORM_TOLERANCE:
        raise StateNormError("Cannot measure an unnormalized state", norm=norm)
    n_qubits = int(amplitudes.size).bit_length() - 1
    return FeatureVector(_measure_amplitudes(amplitudes, n_qubits), n_qubits, 1)


def multiplex_features(
    spec: HamiltonianSpec, inputs: ArrayLike, cfg: EvolutionConfig
) -> FeatureVector:
    """
    Encode one input and measure it at every evolution time.

    H(s) is built and diagonalized once; the shared initial state is evolved
    independently for each dt_l and the measurement blocks are concatenated
    in the order of ``cfg.times``.
    """
    psi0 = cfg.initial_for(spec.n_qubits).amplitudes
    eig = diagonalize(build_hamiltonian(spec, inputs))
    blocks = [
        _measure_amplitudes(_evolve_amplitudes(eig, psi0, dt), spec.n_qubits)
        for dt in cfg.times
    ]
    return FeatureVector(np.concatenate(blocks), spec.n_qubits, cfg.n_times)


def multiplex_features_batch(
    spec: HamiltonianSpec,
    inputs: ArrayLike,
    cfg: EvolutionConfig,
    chunk_size: int = 512,
) -> FeatureArray:
    """
    Vectorized :func:`multiplex_features` over a sequence of inputs.

    Hamiltonians are diagonalized as stacked arrays ``chunk_size`` at a time.

    Args:
        spec: Hamiltonian parameters
        inputs: Input matrix of shape ``(K, d)``
        cfg: Evolution configuration
        chunk_size: Inputs diagonalized per stacked call

    Returns:
        Feature matrix of shape ``(K, L * block_length(N))``; rows agree with
        :func:`multiplex_features` to round-off
    """
    chunk_size = validate_positive_int(chunk_size, "chunk_size")
    s = np.asarray(inputs, dtype=np.float64)
    if s.ndim != 2 or s.shape[1] != spec.input_dim:
        raise ValidationError(
            f"Inputs must have shape (K, {spec.input_dim})",
            parameter="inputs",
            value=s.shape,
        )
    psi0 = cfg.initial_for(spec.n_qubits).amplitudes
    out = np.empty((s.shape[0], feature_length(spec.n_qubits, cfg.n_times)))
    width = block_length(spec.n_qubits)

    for start in range(0, s.shape[0], chunk_size):
        stop = min(start + chunk_size, s.shape[0])
        w, v = ops.eigh(ops.asarray(build_hamiltonian_stack(spec, s[start:stop])))
        eig = Eigensystem(np.asarray(w), np.asarray(v))
        for block, dt in enumerate(cfg.times):
            amplitudes = (
                np.broadcast_to(psi0, (stop - start, psi0.size))
                if dt == 0.0
                else _evolve_amplitudes(eig, psi0, dt)
            )
            out[start:stop, block * width : (block + 1) * width] = _measure_amplitudes(
                amplitudes, spec.n_qubits
            )

    logger.debug(
        "Computed feature batch",
        extra={"n_inputs": s.shape[0], "n_times": cfg.n_times, "width": out.shape[1]},
    )
    return out
