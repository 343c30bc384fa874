"""
Custom exceptions for qrclab.

This module defines domain-specific exception classes that carry the context
of a failure (offending parameter, residual, time, step) both as attributes
and folded into the message.
"""

from __future__ import annotations

from typing import Any

__all__ = [
    "ConfigError",
    "DataFileError",
    "ForecastError",
    "HamiltonianError",
    "IllConditionedError",
    "IntegrationError",
    "LyapunovError",
    "QRCLabError",
    "SpectralError",
    "StateNormError",
    "SweepError",
    "SweepInterrupted",
    "ValidationError",
]


class QRCLabError(Exception):
    """Base exception for all qrclab-related errors."""

    pass


class ValidationError(QRCLabError):
    """Exception raised when input validation fails."""

    def __init__(
        self, message: str, parameter: str | None = None, value: Any | None = None
    ):
        """Initialize ValidationError with message and optional parameter context."""
        self.parameter = parameter
        self.value = value

        if parameter and value is not None:
            message = f"{message}: {parameter}={value}"
        elif parameter:
            message = f"{message}: {parameter}"

        super().__init__(message)


class HamiltonianError(QRCLabError):
    """Exception raised when a Hamiltonian matrix is not Hermitian."""

    def __init__(self, message: str, residual: float | None = None):
        """
        Initialize HamiltonianError with message and optional symmetry residual.

        Args:
            message: The error message
            residual: Max-abs entry of ``H - H^dagger``
        """
        self.residual = residual

        if residual is not None:
            message = f"{message} (residual: {residual:.3e})"

        super().__init__(message)


class StateNormError(QRCLabError):
    """Exception raised when a state vector is not normalized."""

    def __init__(self, message: str, norm: float | None = None):
        """Initialize StateNormError with message and optional observed norm."""
        self.norm = norm

        if norm is not None:
            message = f"{message} (norm: {norm!r})"

        super().__init__(message)


class IllConditionedError(QRCLabError):
    """Exception raised when the ridge normal equations cannot be solved reliably."""

    def __init__(self, message: str, condition: float | None = None):
        """Initialize IllConditionedError with message and optional condition estimate."""
        self.condition = condition

        if condition is not None:
            message = f"{message} (condition estimate: {condition:.3e})"

        super().__init__(message)


class IntegrationError(QRCLabError):
    """Exception raised when the ODE integrator cannot continue."""

    def __init__(self, message: str, time: float | None = None):
        """
        Initialize IntegrationError with message and the last accepted time.

        Args:
            message: The error message
            time: Last accepted integration time
        """
        self.time = time

        if time is not None:
            message = f"{message} (last accepted t={time!r})"

        super().__init__(message)


class LyapunovError(QRCLabError):
    """Exception raised when the separation of the Benettin pair degenerates."""

    def __init__(self, message: str, step: int | None = None):
        """Initialize LyapunovError with message and optional renormalization index."""
        self.step = step

        if step is not None:
            message = f"{message} (renormalization {step})"

        super().__init__(message)


class ForecastError(QRCLabError):
    """Exception raised when closed-loop forecasting produces non-finite output."""

    def __init__(self, message: str, step: int | None = None):
        """Initialize ForecastError with message and the failing step index."""
        self.step = step

        if step is not None:
            message = f"{message} (step {step})"

        super().__init__(message)


class SpectralError(QRCLabError):
    """Exception raised when a series has no oscillatory content."""

    def __init__(self, message: str, component: int | str | None = None):
        """Initialize SpectralError with message and optional component label."""
        self.component = component

        if component is not None:
            message = f"{message} (component {component})"

        super().__init__(message)


class DataFileError(QRCLabError):
    """Exception raised when data files cannot be loaded or processed."""

    def __init__(self, message: str, filename: str | None = None):
        """Initialize DataFileError with message and optional filename context."""
        self.filename = filename

        if filename:
            message = f"{message}: {filename}"

        super().__init__(message)


class ConfigError(QRCLabError):
    """Exception raised for unknown or ill-typed run configuration entries."""

    def __init__(self, message: str, key: str | None = None):
        """Initialize ConfigError with message and optional dotted key path."""
        self.key = key

        if key:
            message = f"{message}: '{key}'"

        super().__init__(message)


class SweepError(QRCLabError):
    """Exception raised during hyperparameter sweeps."""

    def __init__(
        self,
        message: str,
        failed_items: list[Any] | None = None,
        total_items: int | None = None,
    ):
        """Initialize SweepError with message and optional failure context."""
        self.failed_items = failed_items or []
        self.total_items = total_items

        if failed_items and total_items:
            message = f"{message} ({len(failed_items)}/{total_items} items failed)"
        elif failed_items:
            message = f"{message} ({len(failed_items)} items failed)"

        super().__init__(message)


class SweepInterrupted(SweepError):
    """Raised when a sweep is interrupted; carries the partial results table."""

    def __init__(self, message: str, partial: Any, total_items: int | None = None):
        """Initialize SweepInterrupted with the aggregated partial table."""
        self.partial = partial
        super().__init__(message, total_items=total_items)
