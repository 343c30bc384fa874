"""
Tests for the validation helpers.
"""

import math

import numpy as np
import pytest

from qrclab.exceptions import HamiltonianError, StateNormError, ValidationError
from qrclab.validation import (
    validate_choice,
    validate_evolution_times,
    validate_finite_array,
    validate_hermitian,
    validate_length,
    validate_non_negative,
    validate_normalized,
    validate_positive,
    validate_positive_int,
    validate_real,
    validate_unit_interval,
)


class TestScalarValidators:
    """Test scalar range checks."""

    def test_real_accepts_numpy_scalars(self):
        """Test numpy floats and ints are accepted and coerced."""
        assert validate_real(np.float64(2.5), "x") == 2.5
        assert isinstance(validate_real(np.int64(3), "x"), float)

    @pytest.mark.parametrize("bad", [True, "1.0", None, math.nan, math.inf])
    def test_real_rejects(self, bad):
        """Test booleans, strings and non-finite values are refused."""
        with pytest.raises(ValidationError):
            validate_real(bad, "x")

    def test_non_negative(self):
        """Test zero passes and negatives fail."""
        assert validate_non_negative(0.0, "dt") == 0.0
        with pytest.raises(ValidationError, match="dt"):
            validate_non_negative(-1e-12, "dt")

    def test_positive(self):
        """Test zero is refused."""
        assert validate_positive(1e-300, "tol") == 1e-300
        with pytest.raises(ValidationError):
            validate_positive(0.0, "tol")

    @pytest.mark.parametrize("value", [0.0, 0.5, 1.0])
    def test_unit_interval_accepts_bounds(self, value):
        """Test closed bounds of [0, 1]."""
        assert validate_unit_interval(value, "gamma") == value

    @pytest.mark.parametrize("value", [-0.01, 1.01])
    def test_unit_interval_rejects(self, value):
        """Test values outside [0, 1]."""
        with pytest.raises(ValidationError, match="gamma"):
            validate_unit_interval(value, "gamma")

    def test_positive_int(self):
        """Test integer checks with a custom minimum."""
        assert validate_positive_int(np.int32(4), "n") == 4
        assert validate_positive_int(0, "n", minimum=0) == 0
        with pytest.raises(ValidationError):
            validate_positive_int(0, "n")
        with pytest.raises(ValidationError):
            validate_positive_int(2.0, "n")
        with pytest.raises(ValidationError):
            validate_positive_int(True, "n")

    def test_choice(self):
        """Test membership checks."""
        assert validate_choice("ns5", ("ns5", "lorenz63"), "system") == "ns5"
        with pytest.raises(ValidationError, match="expected one of ns5, lorenz63"):
            validate_choice("rossler", ("ns5", "lorenz63"), "system")


class TestArrayValidators:
    """Test array-level checks."""

    def test_finite_array_coerces(self):
        """Test lists become float64 arrays."""
        result = validate_finite_array([1, 2, 3], "x", ndim=1)
        assert result.dtype == np.float64
        np.testing.assert_array_equal(result, [1.0, 2.0, 3.0])

    def test_finite_array_rank(self):
        """Test rank mismatch is refused."""
        with pytest.raises(ValidationError, match="2-dimensional"):
            validate_finite_array([1.0, 2.0], "x", ndim=2)

    def test_finite_array_nan(self):
        """Test NaN entries are refused."""
        with pytest.raises(ValidationError, match="finite"):
            validate_finite_array([1.0, np.nan], "x")

    def test_finite_array_non_numeric(self):
        """Test non-numeric input is refused."""
        with pytest.raises(ValidationError, match="numeric"):
            validate_finite_array(["a", "b"], "x")

    def test_length(self):
        """Test dimension mismatch reporting."""
        validate_length([1, 2, 3], 3, "inputs")
        with pytest.raises(ValidationError, match="expected length 3"):
            validate_length([1, 2], 3, "inputs")


class TestQuantumValidators:
    """Test Hermiticity, normalization and evolution-time checks."""

    def test_hermitian_passes(self):
        """Test a Hermitian matrix is returned as complex."""
        h = np.array([[1.0, 1j], [-1j, 2.0]])
        result = validate_hermitian(h)
        assert result.dtype == np.complex128

    def test_hermitian_residual(self):
        """Test the residual is reported above the tolerance."""
        h = np.array([[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(HamiltonianError) as exc_info:
            validate_hermitian(h)
        assert exc_info.value.residual == pytest.approx(1.0)

    def test_hermitian_tolerance(self):
        """Test asymmetries within the tolerance are accepted."""
        h = np.array([[1.0, 1.0 + 1e-10], [1.0, 1.0]])
        validate_hermitian(h)

    def test_hermitian_square(self):
        """Test non-square input is a validation error."""
        with pytest.raises(ValidationError):
            validate_hermitian(np.zeros((2, 3)))

    def test_normalized(self):
        """Test unit vectors pass and others fail with their norm."""
        validate_normalized(np.array([1.0, 1.0j]) / np.sqrt(2.0))
        with pytest.raises(StateNormError) as exc_info:
            validate_normalized(np.array([1.0, 1.0]))
        assert exc_info.value.norm == pytest.approx(np.sqrt(2.0))

    def test_evolution_times(self):
        """Test zero is allowed, negatives and empty sequences are not."""
        assert validate_evolution_times([0.0, 2]) == (0.0, 2.0)
        with pytest.raises(ValidationError, match=r"times\[1\]"):
            validate_evolution_times([1.0, -0.5])
        with pytest.raises(ValidationError, match="At least one"):
            validate_evolution_times([])
