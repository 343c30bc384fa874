"""
Validation helpers for qrclab.

Precondition checks raising the package's domain exceptions.
"""

from qrclab.validation.validators import (
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

__all__ = [
    "validate_choice",
    "validate_evolution_times",
    "validate_finite_array",
    "validate_hermitian",
    "validate_length",
    "validate_non_negative",
    "validate_normalized",
    "validate_positive",
    "validate_positive_int",
    "validate_real",
    "validate_unit_interval",
]
