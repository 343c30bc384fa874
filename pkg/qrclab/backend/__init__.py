from qrclab.backend.array_ops import get_backend, ops, set_backend

__all__ = ["get_backend", "ops", "set_backend"]
