"""
Validation functions for qrclab.

This module contains the precondition checks shared by the quantum core,
the reservoir layer, the integrators and the forecasting pipeline. Each
validator returns the validated (coerced) value or raises a domain error
carrying the offending parameter.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
import math
import numbers
from typing import TYPE_CHECKING, Any

import numpy as np

from qrclab.backend import ops
from qrclab.constants import HERMITIAN_TOLERANCE, NORM_TOLERANCE
from qrclab.exceptions import HamiltonianError, StateNormError, ValidationError

if TYPE_CHECKING:
    from qrclab.typing_extensions import ComplexArray, RealArray


def validate_real(value: Any, parameter: str) -> float:
    """
    Validate that a value is a finite real number.

    Args:
        value: Candidate value
        parameter: Name used in the error message

    Returns:
        The value as ``float``

    Raises:
        ValidationError: If value is not numeric or not finite
    """
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ValidationError(
            "Value must be a real number", parameter=parameter, value=value
        )
    if not math.isfinite(float(value)):
        raise ValidationError("Value must be finite", parameter=parameter, value=value)
    return float(value)


def validate_non_negative(value: Any, parameter: str) -> float:
    """Validate a finite real number ``>= 0``."""
    result = validate_real(value, parameter)
    if result < 0:
        raise ValidationError(
            "Value must be non-negative", parameter=parameter, value=value
        )
    return result


def validate_positive(value: Any, parameter: str) -> float:
    """Validate a finite real number ``> 0``."""
    result = validate_real(value, parameter)
    if result <= 0:
        raise ValidationError("Value must be positive", parameter=parameter, value=value)
    return result


def validate_unit_interval(value: Any, parameter: str) -> float:
    """Validate a finite real number in the closed interval [0, 1]."""
    result = validate_real(value, parameter)
    if not 0.0 <= result <= 1.0:
        raise ValidationError(
            "Value must lie in [0, 1]", parameter=parameter, value=value
        )
    return result


def validate_positive_int(value: Any, parameter: str, minimum: int = 1) -> int:
    """Validate an integer ``>= minimum`` (booleans are refused)."""
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValidationError(
            "Value must be an integer", parameter=parameter, value=value
        )
    if int(value) < minimum:
        raise ValidationError(
            f"Value must be at least {minimum}", parameter=parameter, value=value
        )
    return int(value)


def validate_finite_array(
    values: Any, parameter: str, ndim: int | None = None
) -> RealArray:
    """
    Validate and coerce an array of finite real numbers.

    Args:
        values: Array-like input
        parameter: Name used in the error message
        ndim: Required number of dimensions (optional)

    Returns:
        A float64 numpy array

    Raises:
        ValidationError: If the array has the wrong rank or non-finite entries
    """
    try:
        array = np.asarray(values, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ValidationError("Values must be numeric", parameter=parameter) from e

    if ndim is not None and array.ndim != ndim:
        raise ValidationError(
            f"Expected a {ndim}-dimensional array",
            parameter=parameter,
            value=array.shape,
        )

    if ops.any(~ops.isfinite(ops.asarray(array))):
        raise ValidationError("Values must be finite", parameter=parameter)

    return array


def validate_length(values: Sequence[Any] | np.ndarray, expected: int, parameter: str) -> None:
    """Raise ``ValidationError`` if ``len(values) != expected``."""
    if len(values) != expected:
        raise ValidationError(
            f"Dimension mismatch: expected length {expected}",
            parameter=parameter,
            value=len(values),
        )


def validate_hermitian(
    matrix: Any, tolerance: float = HERMITIAN_TOLERANCE
) -> ComplexArray:
    """
    Validate that a square matrix is Hermitian.

    Args:
        matrix: Square complex matrix
        tolerance: Largest admissible entry of ``H - H^dagger``

    Returns:
        The matrix as a complex128 numpy array

    Raises:
        ValidationError: If the matrix is not square
        HamiltonianError: If the symmetry residual exceeds ``tolerance``
    """
    array = np.asarray(matrix, dtype=np.complex128)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise ValidationError(
            "Hamiltonian must be a square matrix", parameter="shape", value=array.shape
        )
    residual = float(np.max(np.abs(array - array.conj().T))) if array.size else 0.0
    if residual > tolerance:
        raise HamiltonianError("Matrix is not Hermitian", residual=residual)
    return array


def validate_normalized(
    amplitudes: Any, tolerance: float = NORM_TOLERANCE
) -> ComplexArray:
    """
    Validate that a complex vector has unit Euclidean norm.

    Args:
        amplitudes: State amplitudes
        tolerance: Admissible deviation of the norm from one

    Returns:
        The amplitudes as a complex128 numpy array

    Raises:
        StateNormError: If the norm deviates from one by more than ``tolerance``
    """
    array = np.asarray(amplitudes, dtype=np.complex128)
    norm = float(np.linalg.norm(array))
    if not math.isfinite(norm) or abs(norm - 1.0) > tolerance:
        raise StateNormError("State vector is not normalized", norm=norm)
    return array


def validate_evolution_times(times: Iterable[Any]) -> tuple[float, ...]:
    """
    Validate a non-empty sequence of evolution times ``dt_l >= 0``.

    Returns:
        The times as a tuple of floats

    Raises:
        ValidationError: If the sequence is empty or contains a negative time
    """
    result = tuple(
        validate_non_negative(t, f"times[{i}]") for i, t in enumerate(times)
    )
    if not result:
        raise ValidationError("At least one evolution time is required", "times")
    return result


def validate_choice(value: Any, choices: Iterable[str], parameter: str) -> str:
    """Validate that ``value`` is one of ``choices``."""
    allowed = tuple(choices)
    if value not in allowed:
        raise ValidationError(
            f"Unknown value (expected one of {', '.join(allowed)})",
            parameter=parameter,
            value=value,
        )
    return str(value)
