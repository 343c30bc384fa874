"""
qrclab data handling module.

This module contains parallel task execution and the hyperparameter sweep.
"""


# Lazy import heavy modules to improve startup time
def __getattr__(name: str) -> object:
    if name in ["BatchConfig", "MemoryMonitor", "TaskOutcome", "map_tasks"]:
        from qrclab.data_handling.batch_processing import (
            BatchConfig,
            MemoryMonitor,
            TaskOutcome,
            map_tasks,
        )

        globals().update(
            {
                "BatchConfig": BatchConfig,
                "MemoryMonitor": MemoryMonitor,
                "TaskOutcome": TaskOutcome,
                "map_tasks": map_tasks,
            }
        )
        return globals()[name]
    elif name in [
        "CellParams",
        "SweepCell",
        "SweepGrid",
        "SweepTable",
        "SweepTask",
        "derive_seed",
        "export_heatmap",
        "run_sweep",
        "select_best",
    ]:
        from qrclab.data_handling import sweep

        globals().update(
            {
                key: getattr(sweep, key)
                for key in (
                    "CellParams",
                    "SweepCell",
                    "SweepGrid",
                    "SweepTable",
                    "SweepTask",
                    "derive_seed",
                    "export_heatmap",
                    "run_sweep",
                    "select_best",
                )
            }
        )
        return globals()[name]
    raise AttributeError(f"module '{__name__}' has no attribute '{name}'")


__all__ = [
    "BatchConfig",
    "CellParams",
    "MemoryMonitor",
    "SweepCell",
    "SweepGrid",
    "SweepTable",
    "SweepTask",
    "TaskOutcome",
    "derive_seed",
    "export_heatmap",
    "map_tasks",
    "run_sweep",
    "select_best",
]
