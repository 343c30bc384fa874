"""
Tests for the shift-memory reservoir.
"""

import numpy as np
import pytest

from qrclab.exceptions import ValidationError
from qrclab.quantum.observables import FeatureVector
from qrclab.reservoir import memory
from qrclab.reservoir.memory import (
    ReservoirConfig,
    ReservoirState,
    embed,
    run_sequence,
    shift,
    update,
)
from tests.fixtures.test_base import BaseUnitTest

V = np.array([1.0, 2.0, 3.0, 4.0])


class TestEmbedAndShift(BaseUnitTest):
    """Test the two linear building blocks."""

    def test_embed_interleaves_zeros(self):
        """Test B_8 {v1..v4} = {v1,0,v2,0,v3,0,v4,0}."""
        np.testing.assert_array_equal(embed(V, 8), [1, 0, 2, 0, 3, 0, 4, 0])

    def test_embed_triple_spacing(self):
        """Test B_12 leaves two zeros after each entry."""
        np.testing.assert_array_equal(
            embed(V, 12), [1, 0, 0, 2, 0, 0, 3, 0, 0, 4, 0, 0]
        )

    def test_embed_identity(self):
        """Test l_r = len(m) is the identity."""
        np.testing.assert_array_equal(embed(V, 4), V)

    def test_embed_accepts_feature_vector(self):
        """Test FeatureVector input."""
        fv = FeatureVector(np.linspace(-1.0, 1.0, 9), 2)
        assert embed(fv, 18)[2] == fv.values[1]

    @pytest.mark.parametrize("l_r", [6, 2, 0])
    def test_embed_rejects_non_multiple(self, l_r):
        """Test lengths that are not multiples of the feature length."""
        with pytest.raises(ValidationError, match="multiple"):
            embed(V, l_r)

    def test_shift_by_one(self):
        """Test S_1 {v1..v4} = {v2,v3,v4,v1}."""
        np.testing.assert_array_equal(shift(V, 1), [2, 3, 4, 1])

    def test_shift_negative(self):
        """Test S_-1 {v1..v4} = {v4,v1,v2,v3}."""
        np.testing.assert_array_equal(shift(V, -1), [4, 1, 2, 3])

    def test_shift_zero_and_period(self):
        """Test S_0 and S_1 applied l_r times are the identity."""
        np.testing.assert_array_equal(shift(V, 0), V)
        r = V.copy()
        for _ in range(4):
            r = shift(r, 1)
        np.testing.assert_array_equal(r, V)


class TestReservoirConfig(BaseUnitTest):
    """Test reservoir parameter validation."""

    def test_for_features(self):
        """Test l_r = multiple * feature length."""
        cfg = ReservoirConfig.for_features(90, 0.8)
        assert cfg.length == 270
        assert cfg.shift == 1
        assert cfg.spacing(90) == 3

    def test_gamma_range(self):
        """Test gamma must lie in [0, 1]."""
        with pytest.raises(ValidationError):
            ReservoirConfig(gamma=1.2)

    def test_shift_must_be_integer(self):
        """Test a fractional shift is refused."""
        with pytest.raises(ValidationError, match="integer"):
            ReservoirConfig(gamma=0.5, shift=1.5)

    def test_spacing_mismatch(self):
        """Test spacing fails for incompatible feature lengths."""
        with pytest.raises(ValidationError):
            ReservoirConfig(gamma=0.5, length=10).spacing(4)


class TestUpdate(BaseUnitTest):
    """Test one step of the recursion."""

    def test_hand_evaluated_step(self):
        """Test 0.5 * S_1 (1,1,1,1) + B_4 (1,2) = (1.5, 0.5, 2.5, 0.5)."""
        cfg = ReservoirConfig(gamma=0.5, shift=1, length=4)
        r = update(ReservoirState(np.ones(4)), [1.0, 2.0], cfg)
        np.testing.assert_array_equal(r.values, [1.5, 0.5, 2.5, 0.5])

    def test_memoryless_limit(self, rng):
        """Test gamma = 0 reduces to embed."""
        cfg = ReservoirConfig(gamma=0.0, length=12)
        m = rng.uniform(size=4)
        r = update(ReservoirState(rng.uniform(size=12)), m, cfg)
        np.testing.assert_array_equal(r.values, embed(m, 12))

    def test_norm_preserved_without_input(self, rng):
        """Test gamma = 1 and zero input keep the norm."""
        cfg = ReservoirConfig(gamma=1.0, shift=3, length=8)
        r = ReservoirState(rng.uniform(size=8))
        norm = np.linalg.norm(r.values)
        for _ in range(20):
            r = update(r, np.zeros(4), cfg)
        assert np.linalg.norm(r.values) == pytest.approx(norm, rel=1e-14)

    def test_linearity(self, rng):
        """Test superposition in (prev, m)."""
        cfg = ReservoirConfig(gamma=0.7, shift=2, length=12)
        r1, r2 = rng.uniform(size=(2, 12))
        m1, m2 = rng.uniform(size=(2, 4))
        combined = update(ReservoirState(r1 + 2.0 * r2), m1 + 2.0 * m2, cfg).values
        separate = (
            update(ReservoirState(r1), m1, cfg).values
            + 2.0 * update(ReservoirState(r2), m2, cfg).values
        )
        self.assert_arrays_close(combined, separate, "impulse")

    def test_length_mismatch(self):
        """Test the previous state must have length l_r."""
        cfg = ReservoirConfig(gamma=0.5, length=8)
        with pytest.raises(ValidationError, match="Dimension mismatch"):
            update(ReservoirState.zeros(4), np.ones(4), cfg)

    def test_state_rejects_nan(self):
        """Test reservoir states must be finite."""
        with pytest.raises(ValidationError):
            ReservoirState(np.array([0.0, np.nan]))


class TestRunSequence(BaseUnitTest):
    """Test the iterated recursion."""

    def test_empty_sequence(self):
        """Test no inputs give an empty matrix."""
        out = run_sequence([], ReservoirConfig(gamma=0.5, length=8))
        assert out.shape == (0, 8)

    def test_matches_update(self, rng):
        """Test rows agree with repeated update calls."""
        cfg = ReservoirConfig(gamma=0.8, shift=-2, length=18)
        features = rng.uniform(-1.0, 1.0, size=(10, 6))
        rows = run_sequence(features, cfg)
        r = ReservoirState.zeros(18)
        for k in range(10):
            r = update(r, features[k], cfg)
            np.testing.assert_array_equal(rows[k], r.values)

    def test_two_step_unrolled(self):
        """Test row 2 = gamma S(B m1) + B m2."""
        cfg = ReservoirConfig(gamma=0.5, shift=1, length=8)
        m1, m2 = np.array([1.0, 2.0, 3.0, 4.0]), np.array([5.0, 6.0, 7.0, 8.0])
        rows = run_sequence([m1, m2], cfg)
        np.testing.assert_array_equal(rows[1], 0.5 * shift(embed(m1, 8), 1) + embed(m2, 8))

    @pytest.mark.parametrize("gamma", [0.3, 0.8, 1.0])
    def test_impulse_response(self, gamma):
        """Test the contribution of m^{k-j} to r_k has magnitude gamma^j."""
        cfg = ReservoirConfig(gamma=gamma, shift=1, length=12)
        features = np.zeros((10, 4))
        features[0] = [1.0, 0.0, 0.0, 0.0]
        rows = run_sequence(features, cfg)
        for j in range(10):
            assert np.max(np.abs(rows[j])) == pytest.approx(gamma**j, abs=1e-12)
            assert np.count_nonzero(rows[j]) == (1 if gamma**j > 0 else 0)

    def test_half_swap_is_cyclic_shift(self, rng):
        """Test swapping the two feature blocks shifts every row by l_r/2."""
        cfg = ReservoirConfig(gamma=0.9, shift=1, length=24)
        features = rng.uniform(-1.0, 1.0, size=(15, 8))
        swapped = np.concatenate([features[:, 4:], features[:, :4]], axis=1)
        rows = run_sequence(features, cfg)
        swapped_rows = run_sequence(swapped, cfg)
        for k in range(15):
            self.assert_arrays_close(swapped_rows[k], np.roll(rows[k], 12), "impulse")

    def test_initial_state(self):
        """Test a non-zero r0 decays through the recursion."""
        cfg = ReservoirConfig(gamma=0.5, shift=0, length=4)
        rows = run_sequence(np.zeros((2, 2)), cfg, ReservoirState(np.ones(4)))
        np.testing.assert_array_equal(rows[1], np.full(4, 0.25))

    def test_ragged_features(self):
        """Test features of unequal length are refused."""
        with pytest.raises(ValidationError, match="same length"):
            run_sequence([np.ones(4), np.ones(2)], ReservoirConfig(gamma=0.5, length=8))

    def test_each_step_uses_update(self, monkeypatch):
        """Test the sequence is produced by one update call per input."""
        calls = []
        original = memory.update

        def counting_update(prev, m, cfg):
            calls.append(len(prev))
            return original(prev, m, cfg)

        monkeypatch.setattr(memory, "update", counting_update)
        cfg = ReservoirConfig(gamma=0.7, shift=1, length=8)
        rows = run_sequence(np.ones((5, 4)), cfg)
        assert calls == [8] * 5
        assert rows.shape == (5, 8)

    def test_initial_state_length_checked(self):
        """Test an r0 of the wrong length is refused."""
        with pytest.raises(ValidationError, match="r0"):
            run_sequence(
                np.ones((2, 2)), ReservoirConfig(gamma=0.5, length=4), ReservoirState.zeros(6)
            )
