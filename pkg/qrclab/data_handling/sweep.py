"""
Hyperparameter grid search over (gamma, J, h, dt1, dt2).

Every grid cell is evaluated over several realizations of the random
couplings. The seed of realization r in cell c is derived from
``SeedSequence([master_seed, c, r])``, so results do not depend on the
number of workers or the order in which work items finish. Cells that differ
only in the order of their two evolution times share their seeds.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field
import itertools
import logging
from typing import TYPE_CHECKING, Any, Literal, NamedTuple

import numpy as np
import pandas as pd

from qrclab.constants import (
    DEFAULT_COUPLING_GRID,
    DEFAULT_GAMMA_GRID,
    DEFAULT_LENGTH_MULTIPLE,
    DEFAULT_N_QUBITS,
    DEFAULT_N_REALIZATIONS,
    DEFAULT_RIDGE_LAMBDA,
    DEFAULT_SHIFT,
    DEFAULT_TIME_GRID,
)
from qrclab.data_handling.batch_processing import BatchConfig, TaskOutcome, map_tasks
from qrclab.exceptions import SweepError, SweepInterrupted, ValidationError
from qrclab.forecasting.forecaster import evaluate, train
from qrclab.forecasting.metrics import MetricConfig
from qrclab.quantum.evolution import EvolutionConfig
from qrclab.quantum.hamiltonian import HamiltonianTemplate
from qrclab.quantum.observables import feature_length
from qrclab.reservoir.memory import ReservoirConfig
from qrclab.validation.validators import (
    validate_choice,
    validate_finite_array,
    validate_positive_int,
)

if TYPE_CHECKING:
    from qrclab.forecasting.dataset import DatasetSpec

logger = logging.getLogger(__name__)

AXES: tuple[str, ...] = ("gamma", "J", "h", "dt1", "dt2")
RESULT_COLUMNS: tuple[str, ...] = (*AXES, "mean_vpt", "rel_err", "n_ok")


class CellParams(NamedTuple):
    """Coordinates of one grid cell; ``dt2`` is None for single-time cells."""

    gamma: float
    J: float
    h: float
    dt1: float
    dt2: float | None

    @property
    def times(self) -> tuple[float, ...]:
        return (self.dt1,) if self.dt2 is None else (self.dt1, self.dt2)

    def sort_key(self) -> tuple[float, ...]:
        return (self.gamma, self.J, self.h, self.dt1, -1.0 if self.dt2 is None else self.dt2)


def _grid_values(values: Iterable[float], name: str) -> tuple[float, ...]:
    array = validate_finite_array(list(values), name, ndim=1)
    if array.size == 0:
        raise ValidationError("Grid must not be empty", parameter=name)
    return tuple(float(v) for v in array)


@dataclass(frozen=True)
class SweepGrid:
    """
    Parameter grid and realization count.

    Attributes:
        gamma_values: Memory retentions
        j_values: Coupling amplitudes J
        h_values: Transverse fields h
        dt1_values: First evolution times
        dt2_values: Second evolution times (ignored when not multiplexed)
        n_realizations: Coupling draws per cell
        master_seed: Root of all per-realization seeds
        multiplexed: False evaluates every cell with the single time dt1
    """

    gamma_values: tuple[float, ...] = DEFAULT_GAMMA_GRID
    j_values: tuple[float, ...] = DEFAULT_COUPLING_GRID
    h_values: tuple[float, ...] = DEFAULT_COUPLING_GRID
    dt1_values: tuple[float, ...] = DEFAULT_TIME_GRID
    dt2_values: tuple[float, ...] = DEFAULT_TIME_GRID
    n_realizations: int = DEFAULT_N_REALIZATIONS
    master_seed: int = 0
    multiplexed: bool = True

    def __post_init__(self) -> None:
        for name in ("gamma_values", "j_values", "h_values", "dt1_values", "dt2_values"):
            object.__setattr__(self, name, _grid_values(getattr(self, name), name))
        object.__setattr__(
            self, "n_realizations", validate_positive_int(self.n_realizations, "n_realizations")
        )
        object.__setattr__(
            self, "master_seed", validate_positive_int(self.master_seed, "master_seed", 0)
        )

    def cells(self) -> list[CellParams]:
        """Cells in row-major order of (gamma, J, h, dt1, dt2)."""
        dt2_values: Sequence[float | None] = (
            self.dt2_values if self.multiplexed else (None,)
        )
        return [
            CellParams(*combo)
            for combo in itertools.product(
                self.gamma_values, self.j_values, self.h_values, self.dt1_values, dt2_values
            )
        ]

    def to_dict(self) -> dict[str, Any]:
        payload = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in payload.items()}


def derive_seed(master_seed: int, cell_index: int, realization: int) -> int:
    """Stable 64-bit seed of one realization in one cell."""
    sequence = np.random.SeedSequence([master_seed, cell_index, realization])
    return int(sequence.generate_state(1, np.uint64)[0])


def seed_cell_indices(cells: Sequence[CellParams]) -> list[int]:
    """
    Cell index each cell derives its realization seeds from.

    A cell whose swapped counterpart (dt2, dt1) is also on the grid uses the
    index of the cell holding the times in ascending order, so both draw the
    same couplings and the (dt1, dt2) heatmap is symmetric.
    """
    position = {params: c for c, params in enumerate(cells)}
    indices = []
    for c, params in enumerate(cells):
        if params.dt2 is not None and params.dt2 < params.dt1:
            swapped = params._replace(dt1=params.dt2, dt2=params.dt1)
            indices.append(position.get(swapped, c))
        else:
            indices.append(c)
    return indices


@dataclass(frozen=True, eq=False)
class SweepTask:
    """
    Everything a sweep cell needs besides its grid coordinates.

    Attributes:
        data: Segmented dataset shared by all cells
        ridge_lambda: Readout regularization
        shift: Reservoir shift n_S
        length_multiple: Reservoir length as a multiple of the feature length
        epsilon: VPT threshold
        n_qubits: Register size
        input_scale: Input scale beta
    """

    data: DatasetSpec
    ridge_lambda: float = DEFAULT_RIDGE_LAMBDA
    shift: int = DEFAULT_SHIFT
    length_multiple: int = DEFAULT_LENGTH_MULTIPLE
    epsilon: float = 0.3
    n_qubits: int = DEFAULT_N_QUBITS
    input_scale: float = 1.0


@dataclass(frozen=True)
class SweepCell:
    """
    Aggregated realizations of one grid cell.

    ``mean_vpt`` and ``rel_err`` use successful realizations only. A cell is
    missing when no realization succeeded or the mean VPT is zero.
    """

    params: CellParams
    vpts: tuple[int, ...]
    n_failed: int = 0

    @property
    def n_ok(self) -> int:
        return len(self.vpts)

    @property
    def mean_vpt(self) -> float | None:
        return float(np.mean(self.vpts)) if self.vpts else None

    @property
    def rel_err(self) -> float | None:
        """Population standard deviation over mean; None for missing cells."""
        mean = self.mean_vpt
        if not mean:
            return None
        return float(np.std(self.vpts) / mean)

    @property
    def missing(self) -> bool:
        return not self.mean_vpt

    def to_row(self) -> dict[str, Any]:
        return {
            **self.params._asdict(),
            "mean_vpt": self.mean_vpt,
            "rel_err": self.rel_err,
            "n_ok": self.n_ok,
        }


@dataclass(frozen=True)
class SweepTable:
    """Cells of a sweep in grid order."""

    cells: tuple[SweepCell, ...]
    grid: SweepGrid | None = None
    seeds: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.cells)

    def to_frame(self) -> pd.DataFrame:
        """Results table with columns ``gamma,J,h,dt1,dt2,mean_vpt,rel_err,n_ok``."""
        frame = pd.DataFrame([cell.to_row() for cell in self.cells], columns=RESULT_COLUMNS)
        return frame.astype({"n_ok": "int64"})


def _run_realization(item: tuple[SweepTask, CellParams, int]) -> int:
    task, params, seed = item
    evo = EvolutionConfig(params.times)
    width = feature_length(task.n_qubits, evo.n_times)
    res = ReservoirConfig.for_features(width, params.gamma, task.shift, task.length_multiple)
    template = HamiltonianTemplate(params.J, params.h, task.n_qubits, task.input_scale)
    model = train(task.data, template, evo, res, task.ridge_lambda, seed)
    result = evaluate(model, task.data, MetricConfig(task.epsilon))
    return result.vpt.steps


def _aggregate(
    cells: list[CellParams],
    n_realizations: int,
    outcomes: dict[int, TaskOutcome[int]],
) -> tuple[SweepCell, ...]:
    aggregated = []
    for c, params in enumerate(cells):
        vpts: list[int] = []
        failed = 0
        for r in range(n_realizations):
            outcome = outcomes.get(c * n_realizations + r)
            if outcome is None:
                continue
            if outcome.ok:
                vpts.append(int(outcome.value))  # type: ignore[arg-type]
            else:
                failed += 1
        aggregated.append(SweepCell(params, tuple(vpts), failed))
    return tuple(aggregated)


def run_sweep(
    grid: SweepGrid, task: SweepTask, batch: BatchConfig | None = None
) -> SweepTable:
    """
    Train, forecast and score every (cell, realization) pair.

    Args:
        grid: Parameter grid
        task: Dataset and fixed pipeline settings
        batch: Worker settings; results are identical for any worker count

    Returns:
        ``SweepTable`` in grid order; failed realizations are counted per cell

    Raises:
        SweepInterrupted: On KeyboardInterrupt, carrying the partial table
    """
    batch = batch or BatchConfig(max_workers=1, enable_progress=False)
    cells = grid.cells()
    n_r = grid.n_realizations
    seed_cells = seed_cell_indices(cells)
    seeds = {
        c: tuple(derive_seed(grid.master_seed, seed_cells[c], r) for r in range(n_r))
        for c in range(len(cells))
    }
    items = [
        (task, params, seeds[c][r]) for c, params in enumerate(cells) for r in range(n_r)
    ]

    logger.info(
        "Starting sweep",
        extra={"n_cells": len(cells), "n_realizations": n_r, "workers": batch.max_workers},
    )
    outcomes: dict[int, TaskOutcome[int]] = {}
    try:
        for outcome in map_tasks(_run_realization, items, batch, desc="Sweep"):
            outcomes[outcome.index] = outcome
    except KeyboardInterrupt:
        partial = SweepTable(_aggregate(cells, n_r, outcomes), grid, seeds)
        raise SweepInterrupted(
            f"Sweep interrupted after {len(outcomes)} work items",
            partial=partial,
            total_items=len(items),
        ) from None

    table = SweepTable(_aggregate(cells, n_r, outcomes), grid, seeds)
    n_missing = sum(cell.missing for cell in table.cells)
    logger.info(
        "Sweep finished",
        extra={"n_cells": len(cells), "n_missing": n_missing},
    )
    return table


def select_best(table: SweepTable) -> SweepCell:
    """
    Cell with the highest mean VPT.

    Ties go to the smaller relative error, then to the lexicographically
    smallest parameters.

    Raises:
        SweepError: If the table is empty or every cell is missing
    """
    candidates = [cell for cell in table.cells if not cell.missing]
    if not candidates:
        raise SweepError(
            "No cell has a positive mean VPT",
            failed_items=[cell.params for cell in table.cells],
            total_items=len(table.cells),
        )
    return min(
        candidates,
        key=lambda cell: (-(cell.mean_vpt or 0.0), cell.rel_err or 0.0, cell.params.sort_key()),
    )


def export_heatmap(
    table: SweepTable,
    axes: tuple[str, str],
    fixed: dict[str, float | None] | None = None,
    value: Literal["mean_vpt", "rel_err"] = "mean_vpt",
    reduce: Literal["slice", "max"] = "slice",
) -> pd.DataFrame:
    """
    Matrix of one statistic over two grid axes.

    With ``reduce="slice"`` the remaining parameters are held at ``fixed``
    (unspecified ones default to their value in the best cell). With
    ``reduce="max"`` each entry comes from the cell with the highest mean
    VPT among all cells sharing the two axis values. Missing cells are NaN.

    Args:
        table: Sweep results
        axes: Row and column axis names from ``gamma, J, h, dt1, dt2``
        fixed: Values of the non-plotted parameters
        value: ``"mean_vpt"`` or ``"rel_err"``
        reduce: ``"slice"`` or ``"max"``

    Returns:
        DataFrame indexed by the first axis, one column per second-axis value

    Raises:
        ValidationError: On an unknown axis or an empty slice
    """
    row_axis, col_axis = axes
    for axis in axes:
        validate_choice(axis, AXES, "axes")
    if row_axis == col_axis:
        raise ValidationError("Heatmap axes must differ", "axes", axes)
    validate_choice(value, ("mean_vpt", "rel_err"), "value")
    validate_choice(reduce, ("slice", "max"), "reduce")
    fixed = dict(fixed or {})
    for name in fixed:
        validate_choice(name, AXES, "fixed")

    frame = table.to_frame()
    missing = frame["mean_vpt"].isna() | (frame["mean_vpt"] == 0.0)
    frame.loc[missing, ["mean_vpt", "rel_err"]] = np.nan

    if reduce == "slice":
        others = [a for a in AXES if a not in axes]
        if any(a not in fixed for a in others):
            defaults = _slice_defaults(table)
            for a in others:
                fixed.setdefault(a, defaults[a])
        mask = np.ones(len(frame), dtype=bool)
        for a in others:
            target = fixed[a]
            column = frame[a]
            mask &= column.isna().to_numpy() if target is None else np.isclose(
                column.astype(float).fillna(np.inf), target, rtol=0.0, atol=1e-12
            )
        selected = frame[mask]
        if selected.empty:
            raise ValidationError("Requested slice does not exist", "fixed", fixed)
        selected = selected.groupby([row_axis, col_axis], dropna=False)[value].first()
    else:
        ranked = frame.sort_values("mean_vpt", ascending=False, na_position="last", kind="stable")
        selected = ranked.groupby([row_axis, col_axis], dropna=False)[value].first()

    heatmap = selected.unstack(col_axis)
    heatmap = heatmap.reindex(
        index=sorted(frame[row_axis].dropna().unique()),
        columns=sorted(frame[col_axis].dropna().unique()),
    )
    heatmap.index.name = row_axis
    heatmap.columns.name = col_axis
    return heatmap


def _slice_defaults(table: SweepTable) -> dict[str, float | None]:
    try:
        return select_best(table).params._asdict()
    except SweepError:
        return table.cells[0].params._asdict()
