"""
Tests for CSV and JSON file operations.
"""

import json
import math

import numpy as np
import pandas as pd
import pytest

from qrclab.dynamics.bifurcation import BifurcationResult
from qrclab.dynamics.integrator import Trajectory
from qrclab.exceptions import DataFileError
from qrclab.forecasting.forecaster import ForecastResult
from qrclab.forecasting.metrics import VPTResult
from qrclab.io.file_operations import (
    load_trajectory_csv,
    read_json,
    write_bifurcation_csv,
    write_forecast_csv,
    write_heatmap_csv,
    write_json,
    write_table_csv,
    write_trajectory_csv,
)
from tests.fixtures.test_base import BaseUnitTest


@pytest.fixture
def trajectory(rng):
    times = 0.25 * np.arange(6)
    return Trajectory(times, rng.standard_normal((6, 2)), 0.25, ("x", "y"))


class TestTrajectoryCSV(BaseUnitTest):
    """Test trajectory files."""

    def test_format(self, trajectory, tmp_path):
        """Test header, line endings and row count."""
        path = write_trajectory_csv(trajectory, tmp_path / "traj.csv")
        frame = self.assert_csv_format(path, ["t", "x", "y"])
        assert len(frame) == 6

    def test_values_survive(self, trajectory, tmp_path):
        """Test 17 significant digits reproduce every float."""
        path = write_trajectory_csv(trajectory, tmp_path / "traj.csv")
        loaded = load_trajectory_csv(path)
        np.testing.assert_array_equal(loaded.states, trajectory.states)
        np.testing.assert_array_equal(loaded.times, trajectory.times)
        assert loaded.dt_sample == 0.25
        assert loaded.component_names == ("x", "y")

    def test_rewrite_byte_identical(self, trajectory, tmp_path):
        first = write_trajectory_csv(trajectory, tmp_path / "a.csv")
        second = write_trajectory_csv(load_trajectory_csv(first), tmp_path / "b.csv")
        assert first.read_bytes() == second.read_bytes()

    def test_creates_parent_directories(self, trajectory, tmp_path):
        path = write_trajectory_csv(trajectory, tmp_path / "nested" / "dir" / "traj.csv")
        assert path.exists()

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFileError, match="not found"):
            load_trajectory_csv(tmp_path / "absent.csv")

    def test_missing_time_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n1,2\n3,4\n", encoding="utf-8")
        with pytest.raises(DataFileError, match="'t' column"):
            load_trajectory_csv(path)

    def test_single_row(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("t,x\n0,1\n", encoding="utf-8")
        with pytest.raises(DataFileError):
            load_trajectory_csv(path)

    def test_non_uniform_times(self, tmp_path):
        path = tmp_path / "uneven.csv"
        path.write_text("t,x\n0,1\n1,2\n3,3\n", encoding="utf-8")
        with pytest.raises(DataFileError, match="uniformly"):
            load_trajectory_csv(path)

    def test_non_numeric_values(self, tmp_path):
        path = tmp_path / "text.csv"
        path.write_text("t,x\n0,a\n1,b\n", encoding="utf-8")
        with pytest.raises(DataFileError, match="Invalid trajectory data"):
            load_trajectory_csv(path)


class TestResultCSV(BaseUnitTest):
    """Test forecast, bifurcation and heatmap tables."""

    def test_forecast_columns(self, tmp_path):
        truth = np.arange(6.0).reshape(3, 2)
        result = ForecastResult(
            predictions=np.zeros((3, 2)),
            predictions_physical=truth + 0.5,
            truth=truth,
            vpt=VPTResult(2, 3),
            times=np.array([1.0, 1.5, 2.0]),
        )
        path = write_forecast_csv(result, tmp_path / "forecast.csv")
        frame = self.assert_csv_format(
            path, ["step", "t", "comp_1_pred", "comp_1_true", "comp_2_pred", "comp_2_true"]
        )
        assert frame["step"].tolist() == [1, 2, 3]
        assert frame["comp_2_pred"].tolist() == [1.5, 3.5, 5.5]

    def test_forecast_without_times(self, tmp_path):
        """Test absent times are written as empty fields."""
        zeros = np.zeros((2, 1))
        result = ForecastResult(zeros, zeros, zeros, VPTResult(2, 2))
        path = write_forecast_csv(result, tmp_path / "forecast.csv")
        assert path.read_text(encoding="utf-8").splitlines()[1] == "1,,0,0"

    def test_bifurcation_columns(self, tmp_path):
        result = BifurcationResult(
            np.array([24.0, 24.0, 33.0]), np.array([1.0, 2.0, 3.0]), ("max", "min", "max")
        )
        path = write_bifurcation_csv(result, tmp_path / "bifurcation.csv")
        frame = self.assert_csv_format(path, ["F", "extremum"])
        assert frame["F"].tolist() == [24.0, 24.0, 33.0]

    def test_heatmap_layout(self, tmp_path):
        """Test axis values as header row and first column, NaN as empty."""
        heatmap = pd.DataFrame(
            [[1.0, np.nan], [3.0, 4.0]],
            index=pd.Index([0.5, 1.0], name="dt1"),
            columns=pd.Index([1.0, 2.0], name="dt2"),
        )
        path = write_heatmap_csv(heatmap, tmp_path / "heatmap.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("dt1\\dt2,")
        assert lines[1] == "0.5,1,"
        loaded = pd.read_csv(path, index_col=0)
        assert loaded.columns.astype(float).tolist() == [1.0, 2.0]

    def test_float_precision(self, tmp_path):
        """Test floats are written with 17 significant digits."""
        path = write_table_csv(pd.DataFrame({"v": [0.1]}), tmp_path / "v.csv")
        assert path.read_text(encoding="utf-8") == "v\n0.10000000000000001\n"


class TestJSON(BaseUnitTest):
    """Test JSON documents."""

    def test_numpy_values(self, tmp_path):
        payload = {"a": np.arange(3), "b": np.float64(1.5), "c": np.int64(4)}
        path = write_json(payload, tmp_path / "out.json")
        assert read_json(path) == {"a": [0, 1, 2], "b": 1.5, "c": 4}

    def test_non_finite_as_null(self, tmp_path):
        """Test NaN and infinities are written as null."""
        payload = {"nan": math.nan, "inf": [1.0, math.inf], "arr": np.array([np.nan, 2.0])}
        path = write_json(payload, tmp_path / "out.json")
        text = path.read_text(encoding="utf-8")
        assert "NaN" not in text
        assert "Infinity" not in text
        assert json.loads(text) == {"nan": None, "inf": [1.0, None], "arr": [None, 2.0]}

    def test_trailing_newline(self, tmp_path):
        path = write_json({}, tmp_path / "out.json")
        assert path.read_bytes().endswith(b"}\n")

    def test_paths_as_strings(self, tmp_path):
        path = write_json({"p": tmp_path}, tmp_path / "out.json")
        assert read_json(path)["p"] == str(tmp_path)

    def test_read_missing(self, tmp_path):
        with pytest.raises(DataFileError, match="not found"):
            read_json(tmp_path / "absent.json")

    def test_read_invalid(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("[1,", encoding="utf-8")
        with pytest.raises(DataFileError, match="parsing"):
            read_json(path)
