"""
Tests for unitary evolution of register states.
"""

import math

import numpy as np
import pytest

from qrclab.exceptions import HamiltonianError, StateNormError, ValidationError
from qrclab.quantum.evolution import (
    EvolutionConfig,
    StateVector,
    diagonalize,
    evolve,
    evolve_in_eigenbasis,
)
from qrclab.quantum.observables import measure_features
from tests.fixtures.test_base import BaseUnitTest
from tests.fixtures.test_config import random_hermitian


def taylor_propagator(h: np.ndarray, dt: float, terms: int = 30) -> np.ndarray:
    """exp(-i H dt) by scaling and squaring a truncated Taylor series."""
    norm = np.linalg.norm(h, ord=2) * dt
    squarings = max(0, math.ceil(math.log2(norm)) + 1) if norm > 0 else 0
    a = -1j * h * dt / 2**squarings
    result = np.eye(h.shape[0], dtype=np.complex128)
    term = np.eye(h.shape[0], dtype=np.complex128)
    for k in range(1, terms):
        term = term @ a / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


class TestStateVector(BaseUnitTest):
    """Test state construction and validation."""

    def test_zero_state(self):
        """Test |0...0> has its weight on the first amplitude."""
        psi = StateVector.zero(3)
        assert len(psi) == 8
        assert psi.n_qubits == 3
        assert psi.amplitudes[0] == 1.0

    def test_basis_state(self):
        """Test integer labels map to amplitude indices."""
        assert StateVector.basis(2, 3).amplitudes[3] == 1.0

    def test_unnormalized_refused(self):
        """Test the norm is checked on construction."""
        with pytest.raises(StateNormError):
            StateVector(np.array([1.0, 1.0], dtype=np.complex128))

    def test_dimension_must_be_power_of_two(self):
        """Test a length-3 vector is refused."""
        with pytest.raises(ValidationError, match="power of two"):
            StateVector(np.array([1.0, 0.0, 0.0], dtype=np.complex128))

    def test_amplitudes_read_only(self):
        """Test the stored amplitudes cannot be mutated."""
        psi = StateVector.zero(1)
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 0.0


class TestEvolutionConfig(BaseUnitTest):
    """Test multiplexing configuration."""

    def test_times_validated(self):
        """Test negative times are refused."""
        with pytest.raises(ValidationError):
            EvolutionConfig((1.0, -1.0))

    def test_swapped(self):
        """Test time order reversal."""
        cfg = EvolutionConfig((2.0, 1.0))
        assert cfg.swapped().times == (1.0, 2.0)
        assert cfg.n_times == 2

    def test_default_initial_state(self):
        """Test the default initial state is |0...0>."""
        psi = EvolutionConfig((1.0,)).initial_for(4)
        assert psi.n_qubits == 4
        assert psi.amplitudes[0] == 1.0

    def test_initial_state_size_mismatch(self):
        """Test a custom initial state must match the register."""
        cfg = EvolutionConfig((1.0,), StateVector.zero(2))
        with pytest.raises(ValidationError, match="register size"):
            cfg.initial_for(3)

    def test_dict_round_trip_with_state(self):
        """Test custom complex initial states survive serialization."""
        amps = np.array([1.0, 1.0j], dtype=np.complex128) / np.sqrt(2.0)
        cfg = EvolutionConfig((0.5,), StateVector(amps))
        restored = EvolutionConfig.from_dict(cfg.to_dict())
        assert restored.times == (0.5,)
        np.testing.assert_array_equal(restored.initial_state.amplitudes, amps)


class TestEvolve(BaseUnitTest):
    """Test exp(-i H dt)|psi0> against independent references."""

    def test_matches_taylor_oracle(self):
        """Test random two-qubit Hamiltonians against a Taylor-series propagator."""
        rng = np.random.default_rng(7)
        psi0 = StateVector.zero(2)
        for _ in range(200):
            h = random_hermitian(rng, 4)
            dt = float(rng.uniform(0.0, 3.0))
            expected = taylor_propagator(h, dt) @ psi0.amplitudes
            actual = evolve(h, psi0, dt).amplitudes
            self.assert_arrays_close(actual, expected, "oracle")

    @pytest.mark.parametrize("a", [0.3, 1.0, 2.5])
    def test_rabi_oscillation(self, a):
        """Test <sigma_z>(t) = cos(2 a t) under H = a sigma_x."""
        h = a * np.array([[0.0, 1.0], [1.0, 0.0]])
        psi0 = StateVector.zero(1)
        for t in np.linspace(0.0, 5.0, 11):
            z = measure_features(evolve(h, psi0, float(t))).values[2]
            assert z == pytest.approx(math.cos(2.0 * a * t), abs=1e-10)

    def test_zero_time_returns_input(self, rng):
        """Test dt = 0 is the identity."""
        psi0 = StateVector.basis(2, 1)
        assert evolve(random_hermitian(rng, 4), psi0, 0.0) is psi0

    def test_norm_preserved(self, rng):
        """Test unitarity on a larger register."""
        psi0 = StateVector.zero(4)
        psi = evolve(random_hermitian(rng, 16), psi0, 10.0)
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-10)

    def test_non_hermitian_refused(self):
        """Test a non-Hermitian matrix raises."""
        with pytest.raises(HamiltonianError):
            evolve(np.array([[0.0, 1.0], [0.0, 0.0]]), StateVector.zero(1), 1.0)

    def test_dimension_mismatch(self):
        """Test state and Hamiltonian dimensions must agree."""
        with pytest.raises(ValidationError, match="Dimension mismatch"):
            evolve(np.eye(4), StateVector.zero(1), 1.0)

    def test_negative_time_refused(self):
        """Test dt must be non-negative."""
        with pytest.raises(ValidationError):
            evolve(np.eye(2), StateVector.zero(1), -0.1)

    def test_eigenbasis_reuse(self, rng):
        """Test one diagonalization serves several times."""
        h = random_hermitian(rng, 4)
        eig = diagonalize(h)
        psi0 = StateVector.zero(2)
        for dt in (0.5, 2.0):
            self.assert_arrays_close(
                evolve_in_eigenbasis(eig, psi0, dt).amplitudes,
                evolve(h, psi0, dt).amplitudes,
                "high_precision",
            )
