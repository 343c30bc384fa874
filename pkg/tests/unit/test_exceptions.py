"""
Tests for custom exception classes.

This module tests the behavior of domain-specific exceptions
to ensure they provide appropriate error information.
"""

import pytest

from qrclab.exceptions import (
    ConfigError,
    DataFileError,
    ForecastError,
    HamiltonianError,
    IllConditionedError,
    IntegrationError,
    LyapunovError,
    QRCLabError,
    SpectralError,
    StateNormError,
    SweepError,
    SweepInterrupted,
    ValidationError,
)


class TestExceptionHierarchy:
    """Test exception inheritance hierarchy."""

    def test_base_exception(self):
        """Test QRCLabError is the base exception."""
        error = QRCLabError("Test error")
        assert isinstance(error, Exception)
        assert str(error) == "Test error"

    def test_all_exceptions_inherit_from_base(self):
        """Test that all custom exceptions inherit from QRCLabError."""
        exceptions_to_test = [
            ValidationError("test"),
            HamiltonianError("test"),
            StateNormError("test"),
            IllConditionedError("test"),
            IntegrationError("test"),
            LyapunovError("test"),
            ForecastError("test"),
            SpectralError("test"),
            DataFileError("test"),
            ConfigError("test"),
            SweepError("test"),
            SweepInterrupted("test", partial=None),
        ]

        for error in exceptions_to_test:
            assert isinstance(error, QRCLabError)
            assert isinstance(error, Exception)

    def test_sweep_interrupted_is_sweep_error(self):
        """Test SweepInterrupted can be handled as a SweepError."""
        with pytest.raises(SweepError):
            raise SweepInterrupted("stopped", partial=[])


class TestValidationError:
    """Test ValidationError class."""

    def test_basic_message(self):
        """Test basic error message."""
        assert str(ValidationError("Bad input")) == "Bad input"

    def test_with_parameter(self):
        """Test error with parameter context only."""
        error = ValidationError("Missing value", parameter="gamma")
        assert str(error) == "Missing value: gamma"
        assert error.parameter == "gamma"
        assert error.value is None

    def test_with_parameter_and_value(self):
        """Test error with parameter and value context."""
        error = ValidationError("Out of range", parameter="gamma", value=1.5)
        assert str(error) == "Out of range: gamma=1.5"
        assert error.value == 1.5


class TestContextBearingErrors:
    """Test that context attributes are stored and folded into the message."""

    def test_hamiltonian_residual(self):
        """Test HamiltonianError reports the symmetry residual."""
        error = HamiltonianError("Not Hermitian", residual=2.5e-3)
        assert error.residual == 2.5e-3
        assert "2.500e-03" in str(error)

    def test_state_norm(self):
        """Test StateNormError reports the observed norm."""
        error = StateNormError("Not normalized", norm=1.5)
        assert error.norm == 1.5
        assert "1.5" in str(error)

    def test_ill_conditioned(self):
        """Test IllConditionedError reports the condition estimate."""
        error = IllConditionedError("Singular", condition=1e20)
        assert error.condition == 1e20
        assert "1.000e+20" in str(error)

    def test_integration_time(self):
        """Test IntegrationError carries the last accepted time."""
        error = IntegrationError("Step size underflow", time=12.5)
        assert error.time == 12.5
        assert "t=12.5" in str(error)

    def test_lyapunov_step(self):
        """Test LyapunovError carries the renormalization index."""
        error = LyapunovError("Separation overflow", step=7)
        assert error.step == 7
        assert "renormalization 7" in str(error)

    def test_forecast_step(self):
        """Test ForecastError carries the failing step."""
        error = ForecastError("Non-finite prediction", step=3)
        assert error.step == 3
        assert str(error) == "Non-finite prediction (step 3)"

    def test_spectral_component(self):
        """Test SpectralError accepts a component name."""
        error = SpectralError("Flat", component="u2")
        assert error.component == "u2"
        assert "component u2" in str(error)

    def test_data_file(self):
        """Test DataFileError reports the file name."""
        error = DataFileError("File not found", filename="traj.csv")
        assert error.filename == "traj.csv"
        assert str(error) == "File not found: traj.csv"

    def test_config_key(self):
        """Test ConfigError reports the dotted key."""
        error = ConfigError("Unknown configuration key", key="reservoir.gama")
        assert error.key == "reservoir.gama"
        assert "'reservoir.gama'" in str(error)

    def test_context_is_optional(self):
        """Test that every context argument may be omitted."""
        for cls in (
            HamiltonianError,
            StateNormError,
            IllConditionedError,
            IntegrationError,
            LyapunovError,
            ForecastError,
            SpectralError,
            DataFileError,
            ConfigError,
        ):
            assert str(cls("plain")) == "plain"


class TestSweepErrors:
    """Test the sweep error classes."""

    def test_failed_items_with_total(self):
        """Test failure counts in the message."""
        error = SweepError("Sweep failed", failed_items=["a", "b"], total_items=10)
        assert "2/10 items failed" in str(error)
        assert error.failed_items == ["a", "b"]

    def test_failed_items_without_total(self):
        """Test failure count without a total."""
        error = SweepError("Sweep failed", failed_items=["a"])
        assert "1 items failed" in str(error)

    def test_interrupted_carries_partial(self):
        """Test the partial table travels with the exception."""
        partial = object()
        error = SweepInterrupted("Interrupted", partial=partial, total_items=4)
        assert error.partial is partial
        assert error.total_items == 4
        assert error.failed_items == []
