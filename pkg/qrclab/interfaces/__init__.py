"""
qrclab Interfaces Module.

This module contains the command-line interface.
"""

from qrclab.interfaces.cli import (
    cmd_bifurcation,
    cmd_generate,
    cmd_lyapunov,
    cmd_sweep,
    cmd_train_forecast,
    create_parser,
    main,
)

__all__ = [
    "cmd_bifurcation",
    "cmd_generate",
    "cmd_lyapunov",
    "cmd_sweep",
    "cmd_train_forecast",
    "create_parser",
    "main",
]
