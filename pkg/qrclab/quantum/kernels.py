"""JIT-compilable math kernels for state propagation and Pauli measurement."""

# ruff: noqa: RUF002

from __future__ import annotations

from typing import Any

from qrclab.backend import ops


def _propagate_kernel(eigenvalues: Any, eigenvectors: Any, psi0: Any, dt: Any) -> Any:
    """Pure math kernel for exp(-i H dt)|psi0> in a precomputed eigenbasis.

    Works on a single eigensystem (``V`` of shape ``(D, D)``) or a stack of
    them (``(K, D, D)`` with eigenvalues ``(K, D)``). No validation or
    branching, so it is safe for ``jax.jit``.
    """
    coefficients = ops.einsum("...ba,b->...a", ops.conj(eigenvectors), psi0)
    phases = ops.exp(-1j * eigenvalues * dt)
    return ops.einsum("...ab,...b->...a", eigenvectors, phases * coefficients)


def _measure_kernel(amplitudes: Any, observables: Any) -> tuple[Any, Any]:
    """Pure math kernel for <psi|O_f|psi> over a stack of observables.

    Returns the real parts and the largest absolute imaginary residual.
    """
    applied = ops.einsum("fab,...b->...fa", observables, amplitudes)
    values = ops.einsum("...a,...fa->...f", ops.conj(amplitudes), applied)
    return ops.real(values), ops.max(ops.abs(ops.imag(values)))


_KERNELS = {"propagate": _propagate_kernel, "measure": _measure_kernel}
_compiled: dict[str, Any] = {}


def _kernel(name: str) -> Any:
    """Plain kernel under NumPy, a cached ``jax.jit`` wrapper under JAX."""
    if not ops.is_jax():
        return _KERNELS[name]
    if name not in _compiled:
        import jax  # type: ignore[import-not-found]

        _compiled[name] = jax.jit(_KERNELS[name])
    return _compiled[name]


def _get_propagate_kernel() -> Any:
    return _kernel("propagate")


def _get_measure_kernel() -> Any:
    return _kernel("measure")


def clear_compiled_kernels() -> None:
    """Forget JIT-compiled kernels; called whenever the backend changes."""
    _compiled.clear()
