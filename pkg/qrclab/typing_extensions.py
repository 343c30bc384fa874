"""
Type definitions for qrclab.

Array aliases and protocols shared across sub-packages. All definitions live
under ``TYPE_CHECKING`` so importing this module costs nothing at runtime.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence
    from typing import Any

    import numpy as np
    from numpy.typing import NDArray

    # =============================================================================
    # NumPy array types
    # =============================================================================
    RealArray = NDArray[np.float64]  # Generic float64 array
    ComplexArray = NDArray[np.complex128]  # State amplitudes, Hamiltonians
    IntArray = NDArray[np.integer[Any]]
    BoolArray = NDArray[np.bool_]

    CouplingMatrix = NDArray[np.float64]  # Symmetric J_ij, zero diagonal
    HamiltonianMatrix = NDArray[np.complex128]  # 2^N x 2^N Hermitian
    AmplitudeArray = NDArray[np.complex128]  # |psi> of length 2^N
    FeatureArray = NDArray[np.float64]  # Pauli expectations in [-1, 1]
    DesignMatrix = NDArray[np.float64]  # Stacked reservoir rows R
    StateArray = NDArray[np.float64]  # ODE state or trajectory rows

    # Flexible inputs accepted by validators
    FloatLike = float | np.floating[Any]
    ArrayLike = Sequence[float] | NDArray[Any]

    # Vector field y' = f(t, y)
    VectorField = Callable[[float, NDArray[np.float64]], NDArray[np.float64]]
