"""
Classical memory layer and linear readout of the hybrid reservoir.
"""

from qrclab.reservoir.memory import (
    ReservoirConfig,
    ReservoirState,
    embed,
    run_sequence,
    shift,
    update,
)
from qrclab.reservoir.readout import ReadoutModel, TrainingSet, fit, predict

__all__ = [
    "ReadoutModel",
    "ReservoirConfig",
    "ReservoirState",
    "TrainingSet",
    "embed",
    "fit",
    "predict",
    "run_sequence",
    "shift",
    "update",
]
