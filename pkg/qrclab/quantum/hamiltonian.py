"""
Input-modulated transverse-field Ising Hamiltonians.

The reservoir Hamiltonian of an N-qubit register driven by a d-dimensional
input ``s`` is

    H(s) = sum_{i<j} J_ij X_i X_j + h sum_i Z_i + sum_i h^i(s) X_i,
    h^i(s) = sum_j beta_j C_ij s_j.

Operators are built by Kronecker products in the computational basis with
qubit 1 as the most significant (leftmost) bit. All terms are real in that
basis, so matrices are returned as real symmetric float64 arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
import itertools
from typing import TYPE_CHECKING, Any

import numpy as np

from qrclab.constants import DEFAULT_N_QUBITS, PAULI_AXES
from qrclab.exceptions import ValidationError
from qrclab.validation.validators import (
    validate_finite_array,
    validate_length,
    validate_non_negative,
    validate_positive_int,
    validate_real,
)

if TYPE_CHECKING:
    from qrclab.typing_extensions import (
        ArrayLike,
        ComplexArray,
        CouplingMatrix,
        HamiltonianMatrix,
        RealArray,
    )

_PAULI: dict[str, np.ndarray] = {
    "i": np.eye(2, dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


# =====================================================================================
# PAULI OPERATORS
# =====================================================================================


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@cache
def pauli_operator(n_qubits: int, site: int, axis: str) -> ComplexArray:
    """
    Return the single-site operator sigma_site^axis on ``n_qubits`` qubits.

    Args:
        n_qubits: Register size N
        site: 0-based site index (0 is the leftmost bit)
        axis: One of ``"x"``, ``"y"``, ``"z"``

    Returns:
        Read-only complex matrix of dimension 2^N
    """
    if axis not in PAULI_AXES:
        raise ValidationError("Unknown Pauli axis", parameter="axis", value=axis)
    if not 0 <= site < n_qubits:
        raise ValidationError("Site index out of range", parameter="site", value=site)

    factors = [_PAULI[axis] if k == site else _PAULI["i"] for k in range(n_qubits)]
    op = factors[0]
    for factor in factors[1:]:
        op = np.kron(op, factor)
    return _frozen(op)


@cache
def site_pairs(n_qubits: int) -> tuple[tuple[int, int], ...]:
    """Lexicographically ordered site pairs ``(i, j)`` with ``i < j``."""
    return tuple(itertools.combinations(range(n_qubits), 2))


@cache
def observable_stack(n_qubits: int) -> ComplexArray:
    """
    Stack of the measured Pauli observables in canonical feature order.

    The first ``3N`` entries are the single-site operators (axis-major,
    site-minor), followed by the ``3N(N-1)/2`` same-axis pair operators
    sigma_i^a sigma_j^a with pairs in lexicographic order.

    Returns:
        Read-only array of shape ``(3N + 3N(N-1)/2, 2^N, 2^N)``
    """
    singles = [
        pauli_operator(n_qubits, i, axis)
        for axis in PAULI_AXES
        for i in range(n_qubits)
    ]
    pairs = [
        pauli_operator(n_qubits, i, axis) @ pauli_operator(n_qubits, j, axis)
        for axis in PAULI_AXES
        for i, j in site_pairs(n_qubits)
    ]
    return _frozen(np.stack(singles + pairs))


@cache
def _x_stack(n_qubits: int) -> RealArray:
    return _frozen(
        np.stack([pauli_operator(n_qubits, i, "x").real for i in range(n_qubits)])
    )


# =====================================================================================
# HAMILTONIAN SPECIFICATION
# =====================================================================================


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    """
    Static parameters of the input-modulated Ising Hamiltonian.

    Attributes:
        n_qubits: Register size N (>= 1)
        couplings: Symmetric N x N matrix J_ij with zero diagonal
        transverse_field: Uniform field h along z
        input_scales: Input scales beta_j (length d >= 1)
        input_coupling: N x d matrix C mapping inputs to sites
    """

    n_qubits: int
    couplings: CouplingMatrix
    transverse_field: float
    input_scales: RealArray
    input_coupling: RealArray
    _static_part: RealArray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Validate shapes and symmetry, then cache the input-independent part."""
        n = validate_positive_int(self.n_qubits, "n_qubits")
        couplings = validate_finite_array(self.couplings, "couplings", ndim=2)
        if couplings.shape != (n, n):
            raise ValidationError(
                "Coupling matrix must be N x N", "couplings", couplings.shape
            )
        if not np.array_equal(couplings, couplings.T):
            raise ValidationError("Coupling matrix must be symmetric", "couplings")
        if np.any(np.diag(couplings) != 0.0):
            raise ValidationError("Coupling matrix must have zero diagonal", "couplings")

        scales = validate_finite_array(self.input_scales, "input_scales", ndim=1)
        if scales.size < 1:
            raise ValidationError("At least one input dimension is required", "input_scales")
        coupling_in = validate_finite_array(self.input_coupling, "input_coupling", ndim=2)
        if coupling_in.shape != (n, scales.size):
            raise ValidationError(
                "Input coupling must be N x d", "input_coupling", coupling_in.shape
            )

        object.__setattr__(self, "n_qubits", n)
        object.__setattr__(self, "couplings", _frozen(couplings.copy()))
        object.__setattr__(
            self, "transverse_field", validate_real(self.transverse_field, "transverse_field")
        )
        object.__setattr__(self, "input_scales", _frozen(scales.copy()))
        object.__setattr__(self, "input_coupling", _frozen(coupling_in.copy()))
        object.__setattr__(self, "_static_part", _frozen(self._build_static_part()))

    @classmethod
    def with_identity_coupling(
        cls,
        couplings: ArrayLike,
        transverse_field: float,
        input_dim: int,
        input_scale: float = 1.0,
    ) -> HamiltonianSpec:
        """
        Build a spec with beta_j = ``input_scale`` and C_ij = delta_ij.

        Inputs beyond the register size are ignored; sites beyond the input
        dimension receive no input field.
        """
        matrix = np.asarray(couplings, dtype=np.float64)
        n_qubits = matrix.shape[0]
        d = validate_positive_int(input_dim, "input_dim")
        return cls(
            n_qubits=n_qubits,
            couplings=matrix,
            transverse_field=transverse_field,
            input_scales=np.full(d, float(input_scale)),
            input_coupling=np.eye(n_qubits, d),
        )

    @property
    def input_dim(self) -> int:
        """Input dimension d."""
        return int(self.input_scales.size)

    @property
    def dimension(self) -> int:
        """Hilbert-space dimension 2^N."""
        return 1 << self.n_qubits

    def _build_static_part(self) -> RealArray:
        n = self.n_qubits
        h0 = np.zeros((1 << n, 1 << n), dtype=np.float64)
        for i, j in site_pairs(n):
            if self.couplings[i, j] != 0.0:
                h0 += self.couplings[i, j] * (
                    pauli_operator(n, i, "x").real @ pauli_operator(n, j, "x").real
                )
        if self.transverse_field != 0.0:
            for i in range(n):
                h0 += self.transverse_field * pauli_operator(n, i, "z").real
        return h0

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready representation (used by model export and manifests)."""
        return {
            "n_qubits": self.n_qubits,
            "couplings": self.couplings.tolist(),
            "transverse_field": self.transverse_field,
            "input_scales": self.input_scales.tolist(),
            "input_coupling": self.input_coupling.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> HamiltonianSpec:
        """Inverse of :meth:`to_dict`."""
        return cls(
            n_qubits=int(payload["n_qubits"]),
            couplings=np.asarray(payload["couplings"], dtype=np.float64),
            transverse_field=float(payload["transverse_field"]),
            input_scales=np.asarray(payload["input_scales"], dtype=np.float64),
            input_coupling=np.asarray(payload["input_coupling"], dtype=np.float64),
        )


# =====================================================================================
# OPERATIONS
# =====================================================================================


def sample_couplings(
    j_max: float, seed: int, n_qubits: int = DEFAULT_N_QUBITS
) -> CouplingMatrix:
    """
    Draw a random symmetric coupling matrix.

    Each strict-upper-triangle entry is drawn independently from the uniform
    law on ``[-j_max, j_max]``; the matrix is symmetrized with zero diagonal.

    Args:
        j_max: Coupling amplitude J (>= 0)
        seed: Non-negative integer seed (64-bit values accepted)
        n_qubits: Register size N

    Returns:
        N x N float64 matrix, identical for identical ``(j_max, seed)``
    """
    j_max = validate_non_negative(j_max, "j_max")
    n = validate_positive_int(n_qubits, "n_qubits")
    matrix = np.zeros((n, n), dtype=np.float64)
    if j_max == 0.0 or n == 1:
        return matrix

    rng = np.random.default_rng(seed)
    upper = np.triu_indices(n, k=1)
    matrix[upper] = rng.uniform(-j_max, j_max, size=upper[0].size)
    return matrix + matrix.T


def input_fields(spec: HamiltonianSpec, inputs: ArrayLike) -> RealArray:
    """
    Local x-fields h^i = sum_j beta_j C_ij s_j.

    Accepts a single input vector of length d or a stack of shape ``(K, d)``.
    """
    s = np.asarray(inputs, dtype=np.float64)
    if s.shape[-1:] != (spec.input_dim,):
        raise ValidationError(
            f"Dimension mismatch: expected input length {spec.input_dim}",
            parameter="input",
            value=s.shape,
        )
    return (s * spec.input_scales) @ spec.input_coupling.T


def build_hamiltonian(spec: HamiltonianSpec, inputs: ArrayLike) -> HamiltonianMatrix:
    """
    Build H(s) for one input vector.

    Args:
        spec: Hamiltonian parameters
        inputs: Input vector s of length d

    Returns:
        Real symmetric matrix of dimension 2^N

    Raises:
        ValidationError: If the input length differs from spec.input_dim
    """
    s = np.asarray(inputs, dtype=np.float64)
    if s.ndim != 1:
        raise ValidationError("Input must be a vector", parameter="input", value=s.shape)
    validate_length(s, spec.input_dim, "input")
    fields = input_fields(spec, s)
    return spec._static_part + np.einsum("i,iab->ab", fields, _x_stack(spec.n_qubits))


def build_hamiltonian_stack(spec: HamiltonianSpec, inputs: ArrayLike) -> RealArray:
    """Build H(s_k) for a stack of inputs of shape ``(K, d)``; returns ``(K, D, D)``."""
    s = np.asarray(inputs, dtype=np.float64)
    if s.ndim != 2:
        raise ValidationError("Inputs must be a matrix", parameter="inputs", value=s.shape)
    fields = input_fields(spec, s)
    return spec._static_part[None, :, :] + np.einsum(
        "ki,iab->kab", fields, _x_stack(spec.n_qubits)
    )


@dataclass(frozen=True)
class HamiltonianTemplate:
    """
    Hamiltonian parameters with couplings still to be drawn.

    ``realize`` samples J_ij from ``sample_couplings(coupling_amplitude, seed)``
    and couples input j to site j with scale ``input_scale``.
    """

    coupling_amplitude: float
    transverse_field: float
    n_qubits: int = DEFAULT_N_QUBITS
    input_scale: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "coupling_amplitude",
            validate_non_negative(self.coupling_amplitude, "coupling_amplitude"),
        )
        object.__setattr__(
            self, "transverse_field", validate_real(self.transverse_field, "transverse_field")
        )
        object.__setattr__(self, "n_qubits", validate_positive_int(self.n_qubits, "n_qubits"))
        object.__setattr__(self, "input_scale", validate_real(self.input_scale, "input_scale"))

    def realize(self, input_dim: int, seed: int) -> HamiltonianSpec:
        couplings = sample_couplings(self.coupling_amplitude, seed, self.n_qubits)
        return HamiltonianSpec.with_identity_coupling(
            couplings, self.transverse_field, input_dim, self.input_scale
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "coupling_amplitude": self.coupling_amplitude,
            "transverse_field": self.transverse_field,
            "n_qubits": self.n_qubits,
            "input_scale": self.input_scale,
        }
