"""
Exact unitary evolution of reservoir states.

Evolution uses a Hermitian eigendecomposition H = V diag(w) V^dagger, so
exp(-i H dt)|psi> = V exp(-i w dt) V^dagger |psi>. One eigensystem serves
every evolution time of a multiplexed measurement.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
from typing import TYPE_CHECKING, Any

import numpy as np

from qrclab.backend import ops
from qrclab.constants import NORM_TOLERANCE
from qrclab.exceptions import ValidationError
from qrclab.quantum.kernels import _get_propagate_kernel
from qrclab.validation.validators import (
    validate_evolution_times,
    validate_hermitian,
    validate_non_negative,
    validate_normalized,
)

if TYPE_CHECKING:
    from qrclab.typing_extensions import AmplitudeArray, ArrayLike, RealArray

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state |psi> of an N-qubit register (norm 1 within 1e-10)."""

    amplitudes: AmplitudeArray

    def __post_init__(self) -> None:
        amplitudes = validate_normalized(self.amplitudes, NORM_TOLERANCE)
        if amplitudes.ndim != 1 or amplitudes.size < 2 or amplitudes.size & (
            amplitudes.size - 1
        ):
            raise ValidationError(
                "State dimension must be a power of two",
                parameter="amplitudes",
                value=amplitudes.shape,
            )
        amplitudes = amplitudes.copy()
        amplitudes.flags.writeable = False
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def zero(cls, n_qubits: int) -> StateVector:
        """The computational basis state |0...0>."""
        return cls.basis(n_qubits, 0)

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> StateVector:
        """Computational basis state with the given integer label."""
        amplitudes = np.zeros(1 << n_qubits, dtype=np.complex128)
        amplitudes[index] = 1.0
        return cls(amplitudes)

    @property
    def n_qubits(self) -> int:
        return int(self.amplitudes.size).bit_length() - 1

    def __len__(self) -> int:
        return int(self.amplitudes.size)


@dataclass(frozen=True)
class EvolutionConfig:
    """
    Temporal multiplexing setup.

    Attributes:
        times: Evolution times dt_1..dt_L (each >= 0, L >= 1)
        initial_state: Shared initial state; ``None`` means |0...0>
    """

    times: tuple[float, ...]
    initial_state: StateVector | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "times", validate_evolution_times(self.times))

    @property
    def n_times(self) -> int:
        """Multiplexing depth L."""
        return len(self.times)

    def initial_for(self, n_qubits: int) -> StateVector:
        """Resolve the initial state for a register of ``n_qubits`` qubits."""
        if self.initial_state is None:
            return StateVector.zero(n_qubits)
        if self.initial_state.n_qubits != n_qubits:
            raise ValidationError(
                "Initial state does not match the register size",
                parameter="initial_state",
                value=self.initial_state.n_qubits,
            )
        return self.initial_state

    def swapped(self) -> EvolutionConfig:
        """Configuration with the evolution times in reverse order."""
        return EvolutionConfig(tuple(reversed(self.times)), self.initial_state)

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"times": list(self.times)}
        if self.initial_state is not None:
            amps = self.initial_state.amplitudes
            payload["initial_state"] = {"real": amps.real.tolist(), "imag": amps.imag.tolist()}
        return payload

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> EvolutionConfig:
        state = payload.get("initial_state")
        initial = None
        if state is not None:
            initial = StateVector(
                np.asarray(state["real"]) + 1j * np.asarray(state["imag"])
            )
        return cls(tuple(payload["times"]), initial)


@dataclass(frozen=True, eq=False)
class Eigensystem:
    """Eigenvalues ``w`` and orthonormal eigenvectors ``V`` (columns) of H."""

    eigenvalues: RealArray
    eigenvectors: Any


def diagonalize(h_matrix: ArrayLike) -> Eigensystem:
    """
    Validate and diagonalize a Hermitian matrix.

    Raises:
        HamiltonianError: If the symmetry residual exceeds 1e-8
    """
    array = validate_hermitian(h_matrix)
    if not np.any(array.imag):
        array = array.real
    w, v = ops.eigh(ops.asarray(array))
    return Eigensystem(np.asarray(w), np.asarray(v))


def _evolve_amplitudes(eig: Eigensystem, psi0: AmplitudeArray, dt: float) -> AmplitudeArray:
    if dt == 0.0:
        return psi0
    kernel = _get_propagate_kernel()
    return np.asarray(kernel(eig.eigenvalues, eig.eigenvectors, psi0, dt))


def evolve_in_eigenbasis(eig: Eigensystem, psi0: StateVector, dt: float) -> StateVector:
    """Evolve ``psi0`` for time ``dt`` using a precomputed eigensystem."""
    dt = validate_non_negative(dt, "dt")
    if eig.eigenvalues.size != len(psi0):
        raise ValidationError(
            "Dimension mismatch between Hamiltonian and state",
            parameter="psi0",
            value=len(psi0),
        )
    if dt == 0.0:
        return psi0
    return StateVector(_evolve_amplitudes(eig, psi0.amplitudes, dt))


def evolve(h_matrix: ArrayLike, psi0: StateVector, dt: float) -> StateVector:
    """
    Return exp(-i H dt)|psi0>.

    Args:
        h_matrix: Hermitian matrix of dimension 2^N
        psi0: Normalized initial state
        dt: Evolution time (>= 0); ``dt == 0`` returns ``psi0`` unchanged

    Returns:
        The evolved state (norm preserved within 1e-10)

    Raises:
        HamiltonianError: If ``h_matrix`` is not Hermitian
        ValidationError: On dimension mismatch or negative ``dt``
    """
    dt = validate_non_negative(dt, "dt")
    eig = diagonalize(h_matrix)
    return evolve_in_eigenbasis(eig, psi0, dt)
