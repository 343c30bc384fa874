"""
File operations for qrclab.

CSV writers share one format: comma separator, header row, LF line endings
and floats printed with 17 significant digits so repeated runs can be
compared byte for byte. Missing values are written as empty fields.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np
import pandas as pd

from qrclab.constants import FLOAT_FORMAT
from qrclab.dynamics.integrator import Trajectory
from qrclab.exceptions import DataFileError, QRCLabError

if TYPE_CHECKING:
    import os

    from qrclab.dynamics.bifurcation import BifurcationResult
    from qrclab.forecasting.forecaster import ForecastResult

PathLike = str | Path


def _prepare(path: PathLike) -> Path:
    output_path = Path(path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    return output_path


def write_table_csv(
    frame: pd.DataFrame,
    path: PathLike,
    *,
    index: bool = False,
    index_label: str | None = None,
) -> Path:
    """Write a DataFrame in the shared CSV format."""
    output_path = _prepare(path)
    frame.to_csv(
        output_path,
        index=index,
        index_label=index_label,
        float_format=FLOAT_FORMAT,
        na_rep="",
        lineterminator="\n",
    )
    return output_path


def write_trajectory_csv(traj: Trajectory, path: PathLike) -> Path:
    """Columns ``t`` followed by the component names."""
    frame = pd.DataFrame(traj.states, columns=list(traj.component_names))
    frame.insert(0, "t", traj.times)
    return write_table_csv(frame, path)


def load_trajectory_csv(path: PathLike) -> Trajectory:
    """
    Load a trajectory written by :func:`write_trajectory_csv`.

    The sampling step is the mean spacing of the stored times.

    Raises:
        DataFileError: If the file is missing, malformed or not uniformly sampled
    """
    file_path = Path(path)
    if not file_path.exists():
        raise DataFileError("Trajectory file not found", str(path))

    try:
        frame = pd.read_csv(file_path, float_precision="round_trip")
    except (ValueError, OSError, pd.errors.ParserError) as e:
        raise DataFileError(f"Error parsing trajectory file: {e}", str(path)) from e

    if frame.columns.size < 2 or frame.columns[0] != "t" or len(frame) < 2:
        raise DataFileError(
            "Expected a 't' column, at least one component and two rows", str(path)
        )
    try:
        times = frame["t"].to_numpy(dtype=np.float64)
        states = frame.iloc[:, 1:].to_numpy(dtype=np.float64)
        return Trajectory(
            times,
            states,
            float((times[-1] - times[0]) / (times.size - 1)),
            tuple(str(c) for c in frame.columns[1:]),
        )
    except (ValueError, QRCLabError) as e:
        raise DataFileError(f"Invalid trajectory data: {e}", str(path)) from e


def write_forecast_csv(result: ForecastResult, path: PathLike) -> Path:
    """Columns ``step,t,comp_1_pred,comp_1_true,...`` in physical units."""
    n_steps, dim = result.truth.shape
    data: dict[str, Any] = {
        "step": np.arange(1, n_steps + 1),
        "t": result.times if result.times.size == n_steps else np.full(n_steps, np.nan),
    }
    for i in range(dim):
        data[f"comp_{i + 1}_pred"] = result.predictions_physical[:, i]
        data[f"comp_{i + 1}_true"] = result.truth[:, i]
    return write_table_csv(pd.DataFrame(data), path)


def write_bifurcation_csv(result: BifurcationResult, path: PathLike) -> Path:
    """Columns ``F,extremum``."""
    frame = pd.DataFrame({"F": result.forcing, "extremum": result.extrema})
    return write_table_csv(frame, path)


def write_heatmap_csv(heatmap: pd.DataFrame, path: PathLike) -> Path:
    """Matrix with the axis values as header row and first column."""
    label = f"{heatmap.index.name}\\{heatmap.columns.name}"
    return write_table_csv(heatmap, path, index=True, index_label=label)


def _convert_numpy(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, np.floating):
        return float(obj)
    elif isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def write_json(payload: Any, path: PathLike) -> Path:
    """
    Write JSON with shortest round-trip float representations.

    Non-finite floats are written as ``null``.
    """
    output_path = _prepare(path)
    text = json.dumps(_sanitize(payload), indent=2, default=_convert_numpy)
    output_path.write_text(text + "\n", encoding="utf-8", newline="\n")
    return output_path


def _sanitize(obj: Any) -> Any:
    if isinstance(obj, float | np.floating):
        return float(obj) if np.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, list | tuple):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _sanitize(obj.tolist())
    return obj


def read_json(path: str | os.PathLike[str]) -> Any:
    """
    Read a JSON document.

    Raises:
        DataFileError: If the file is missing or not valid JSON
    """
    file_path = Path(path)
    if not file_path.exists():
        raise DataFileError("File not found", str(path))
    try:
        return json.loads(file_path.read_text(encoding="utf-8"))
    except (ValueError, OSError) as e:
        raise DataFileError(f"Error parsing JSON file: {e}", str(path)) from e
