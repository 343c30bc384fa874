"""
Array namespace dispatch for the quantum kernels.

The state-vector kernels only need a handful of array primitives. Each
backend forwards those primitives to an array namespace (``numpy`` or
``jax.numpy``); the module-level ``ops`` proxy always points at the active
one so kernels never hold a stale reference after ``set_backend``.
"""

from __future__ import annotations

import importlib.util
import os
import shutil
from types import ModuleType
from typing import Any, ClassVar, Protocol, runtime_checkable

import numpy as np

Array = Any

BACKEND_ENV_VAR = "QRCLAB_BACKEND"


@runtime_checkable
class ArrayBackend(Protocol):
    """Primitives used by the propagation and measurement kernels."""

    name: ClassVar[str]

    def asarray(self, x: Any, dtype: Any = None) -> Array: ...
    def einsum(self, subscripts: str, *operands: Any) -> Array: ...
    def exp(self, x: Any) -> Array: ...
    def conj(self, x: Any) -> Array: ...
    def real(self, x: Any) -> Array: ...
    def imag(self, x: Any) -> Array: ...
    def abs(self, x: Any) -> Array: ...
    def max(self, x: Any, axis: Any = None) -> Array: ...
    def isfinite(self, x: Any) -> Array: ...
    def any(self, x: Any) -> bool: ...
    def eigh(self, x: Any) -> tuple[Array, Array]: ...


class _NamespaceBackend:
    """Forward every primitive to an array namespace ``xp``."""

    name: ClassVar[str] = ""

    def __init__(self, xp: ModuleType) -> None:
        self.xp = xp

    def asarray(self, x: Any, dtype: Any = None) -> Array:
        return self.xp.asarray(x, dtype=dtype)

    def einsum(self, subscripts: str, *operands: Any) -> Array:
        return self.xp.einsum(subscripts, *operands)

    def exp(self, x: Any) -> Array:
        return self.xp.exp(x)

    def conj(self, x: Any) -> Array:
        return self.xp.conj(x)

    def real(self, x: Any) -> Array:
        return self.xp.real(x)

    def imag(self, x: Any) -> Array:
        return self.xp.imag(x)

    def abs(self, x: Any) -> Array:
        return self.xp.abs(x)

    def max(self, x: Any, axis: Any = None) -> Array:
        return self.xp.max(x, axis=axis)

    def isfinite(self, x: Any) -> Array:
        return self.xp.isfinite(x)

    def any(self, x: Any) -> bool:
        return bool(self.xp.any(x))

    def eigh(self, x: Any) -> tuple[Array, Array]:
        w, v = self.xp.linalg.eigh(x)
        return w, v

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class NumpyBackend(_NamespaceBackend):
    name = "numpy"

    def __init__(self) -> None:
        super().__init__(np)


class JaxBackend(_NamespaceBackend):
    """jax.numpy with 64-bit floats enabled."""

    name = "jax"

    def __init__(self) -> None:
        import jax  # type: ignore[import-not-found]

        jax.config.update("jax_enable_x64", True)
        import jax.numpy as jnp  # type: ignore[import-not-found]

        super().__init__(jnp)


BACKENDS: dict[str, type[_NamespaceBackend]] = {
    NumpyBackend.name: NumpyBackend,
    JaxBackend.name: JaxBackend,
}


def _jax_gpu_available() -> bool:
    # nvidia-smi lookup first: importing jax costs about a second
    if importlib.util.find_spec("jax") is None or shutil.which("nvidia-smi") is None:
        return False
    try:
        import jax  # type: ignore[import-not-found]

        return bool(jax.default_backend() == "gpu")
    except (ImportError, RuntimeError):
        return False


def _initial_backend() -> ArrayBackend:
    """Backend named by ``QRCLAB_BACKEND``, else JAX on a GPU host, else NumPy.

    Register matrices are at most a few hundred rows wide, so on CPU the
    dispatch overhead of XLA outweighs its kernels and NumPy stays the default.
    """
    requested = os.environ.get(BACKEND_ENV_VAR, "").strip().lower()
    if requested in BACKENDS:
        return BACKENDS[requested]()
    if _jax_gpu_available():
        return JaxBackend()
    return NumpyBackend()


_backend: ArrayBackend = _initial_backend()


def get_backend() -> ArrayBackend:
    return _backend


def set_backend(name: str) -> None:
    """Switch the active backend and drop compiled kernels of the old one."""
    global _backend
    try:
        backend_cls = BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"Unknown backend: {name!r} (choose from {sorted(BACKENDS)})"
        ) from None
    _backend = backend_cls()
    ops._invalidate_cache()

    from qrclab.quantum.kernels import clear_compiled_kernels

    clear_compiled_kernels()


class _OpsProxy:
    """Proxy resolving primitives against the active backend, cached per name."""

    def __getattr__(self, name: str) -> Any:
        attr = getattr(_backend, name)
        object.__setattr__(self, name, attr)
        return attr

    def is_jax(self) -> bool:
        return isinstance(_backend, JaxBackend)

    def _invalidate_cache(self) -> None:
        for key in list(self.__dict__):
            object.__delattr__(self, key)


ops = _OpsProxy()
