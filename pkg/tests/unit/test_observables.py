"""
Tests for Pauli feature measurement and temporal multiplexing.
"""

import numpy as np
import pytest

from qrclab.backend import ops
from qrclab.exceptions import StateNormError, ValidationError
from qrclab.quantum.evolution import EvolutionConfig, StateVector
from qrclab.quantum.hamiltonian import HamiltonianSpec, sample_couplings
from qrclab.quantum.observables import (
    FeatureVector,
    block_length,
    feature_length,
    measure_features,
    multiplex_features,
    multiplex_features_batch,
)
from tests.fixtures.test_base import BaseUnitTest


@pytest.fixture
def spec():
    """Five-qubit spec driven by a three-dimensional input."""
    return HamiltonianSpec.with_identity_coupling(sample_couplings(0.5, 21, 5), 0.3, 3)


class TestFeatureLayout(BaseUnitTest):
    """Test feature dimensions."""

    @pytest.mark.parametrize(
        "n_qubits, n_times, expected", [(5, 1, 45), (5, 2, 90), (3, 2, 36), (1, 1, 3)]
    )
    def test_feature_length(self, n_qubits, n_times, expected):
        """Test L * (3N + 3N(N-1)/2)."""
        assert feature_length(n_qubits, n_times) == expected

    def test_block_length(self):
        """Test the single-block length."""
        assert block_length(5) == 45

    def test_feature_vector_checks_length(self):
        """Test a mismatched layout is refused."""
        with pytest.raises(ValidationError, match="length 45"):
            FeatureVector(np.zeros(44), 5)

    def test_blocks_view(self):
        """Test blocks reshape to (L, block_length)."""
        fv = FeatureVector(np.arange(18.0) / 18.0, 2, 2)
        assert fv.blocks().shape == (2, 9)
        assert len(fv) == 18


class TestMeasureFeatures(BaseUnitTest):
    """Test expectation values on states with known answers."""

    def test_all_zero_state(self):
        """Test |0...0>: Z singles and ZZ pairs are +1, everything else 0."""
        values = measure_features(StateVector.zero(5)).values
        assert len(values) == 45
        np.testing.assert_array_equal(values[:10], 0.0)
        np.testing.assert_array_equal(values[10:15], 1.0)
        np.testing.assert_array_equal(values[15:35], 0.0)
        np.testing.assert_array_equal(values[35:45], 1.0)

    def test_bell_state(self):
        """Test (|00> + |11>)/sqrt(2): XX = 1, YY = -1, ZZ = 1, singles vanish."""
        amps = np.array([1.0, 0.0, 0.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)
        values = measure_features(amps).values
        np.testing.assert_allclose(values[:6], 0.0, atol=1e-15)
        np.testing.assert_allclose(values[6:], [1.0, -1.0, 1.0], atol=1e-15)

    def test_site_order(self):
        """Test |01> flips only the second site's Z expectation."""
        values = measure_features(StateVector.basis(2, 1)).values
        np.testing.assert_array_equal(values[4:6], [1.0, -1.0])
        assert values[8] == -1.0

    def test_plus_state_x_expectation(self):
        """Test |+> gives <X> = 1 and <Y> = 0."""
        values = measure_features(np.array([1.0, 1.0]) / np.sqrt(2.0)).values
        np.testing.assert_allclose(values, [1.0, 0.0, 0.0], atol=1e-15)

    def test_unnormalized_refused(self):
        """Test raw amplitudes off the unit sphere raise."""
        with pytest.raises(StateNormError):
            measure_features(np.array([1.0, 0.1]))

    def test_values_bounded(self, rng):
        """Test every expectation lies in [-1, 1]."""
        amps = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        values = measure_features(amps / np.linalg.norm(amps)).values
        assert np.all(np.abs(values) <= 1.0)


class TestMultiplexing(BaseUnitTest):
    """Test multi-time feature concatenation."""

    def test_length_and_blocks(self, spec):
        """Test one block per evolution time."""
        fv = multiplex_features(spec, [0.1, 0.5, 0.9], EvolutionConfig((2.0, 1.0)))
        assert len(fv) == 90
        assert fv.n_blocks == 2

    def test_zero_time_block_is_initial_state(self, spec):
        """Test dt = 0 measures the unevolved register."""
        fv = multiplex_features(spec, [0.1, 0.5, 0.9], EvolutionConfig((0.0, 1.0)))
        np.testing.assert_array_equal(
            fv.blocks()[0], measure_features(StateVector.zero(5)).values
        )

    def test_swapped_times_swap_blocks(self, spec):
        """Test reversing the times reverses the blocks."""
        s = [0.4, -0.2, 0.7]
        cfg = EvolutionConfig((2.0, 1.0))
        forward = multiplex_features(spec, s, cfg).blocks()
        backward = multiplex_features(spec, s, cfg.swapped()).blocks()
        self.assert_arrays_close(forward[::-1], backward, "high_precision")

    def test_input_dependence(self, spec):
        """Test different inputs give different features."""
        cfg = EvolutionConfig((1.0,))
        a = multiplex_features(spec, [0.1, 0.1, 0.1], cfg).values
        b = multiplex_features(spec, [0.9, 0.1, 0.1], cfg).values
        assert not np.allclose(a, b)

    @pytest.mark.parametrize("chunk_size", [1, 3, 512])
    def test_batch_matches_single(self, spec, rng, chunk_size):
        """Test the stacked path agrees row by row for every chunking."""
        cfg = EvolutionConfig((0.0, 2.0, 1.0))
        inputs = rng.uniform(-1.0, 1.0, size=(7, 3))
        batch = multiplex_features_batch(spec, inputs, cfg, chunk_size=chunk_size)
        assert batch.shape == (7, 135)
        for k in range(7):
            self.assert_arrays_close(
                batch[k], multiplex_features(spec, inputs[k], cfg).values, "high_precision"
            )

    def test_batch_diagonalizes_through_backend(self, spec, rng, monkeypatch):
        """Test each chunk is diagonalized by the active array backend."""
        shapes = []
        original = ops.eigh

        def recording_eigh(x):
            shapes.append(x.shape)
            return original(x)

        monkeypatch.setattr(ops, "eigh", recording_eigh)
        inputs = rng.uniform(-1.0, 1.0, size=(5, 3))
        multiplex_features_batch(spec, inputs, EvolutionConfig((1.0,)), chunk_size=2)
        assert shapes == [(2, 32, 32), (2, 32, 32), (1, 32, 32)]

    def test_batch_shape_check(self, spec):
        """Test the batch path rejects the wrong input width."""
        with pytest.raises(ValidationError, match=r"\(K, 3\)"):
            multiplex_features_batch(spec, np.zeros((4, 2)), EvolutionConfig((1.0,)))
