"""
Report formatting and run manifests.

Every command writes a manifest with the resolved configuration, the seeds,
the library versions, derived quantities and the list of files it produced.
"""

from __future__ import annotations

from datetime import UTC, datetime
import platform
from typing import TYPE_CHECKING, Any

import numpy as np
import pandas as pd
import scipy

from qrclab import __version__

if TYPE_CHECKING:
    from qrclab.data_handling.sweep import SweepCell, SweepTable
    from qrclab.forecasting.metrics import VPTResult

MANIFEST_VERSION = 1


def library_versions() -> dict[str, str]:
    """Versions of qrclab, its numerical stack and Python."""
    return {
        "qrclab": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
        "python": platform.python_version(),
    }


def build_manifest(
    command: str,
    config: dict[str, Any],
    *,
    seeds: dict[str, Any] | None = None,
    derived: dict[str, Any] | None = None,
    outputs: list[str] | None = None,
) -> dict[str, Any]:
    """
    Assemble a run manifest.

    The ``config`` entry is the fully resolved run configuration; feeding the
    manifest back as ``--config`` reproduces the run.
    """
    return {
        "manifest_version": MANIFEST_VERSION,
        "command": command,
        "created": datetime.now(UTC).isoformat(timespec="seconds"),
        "config": config,
        "seeds": seeds or {},
        "versions": library_versions(),
        "derived": derived or {},
        "outputs": sorted(outputs or []),
    }


def _fmt(value: float | None, precision: int) -> str:
    return "n/a" if value is None else f"{value:.{precision}f}"


def format_vpt_report(vpt: VPTResult, precision: int = 4) -> str:
    """Human-readable VPT summary in all available units."""
    lines = ["Valid prediction time", "=" * 40]
    lines.append(f"steps: {vpt.steps} of {vpt.horizon}")
    lines.append(f"time: {_fmt(vpt.time, precision)}")
    lines.append(f"Lyapunov times: {_fmt(vpt.lyapunov_times, precision)}")
    lines.append(f"nonlinear times: {_fmt(vpt.nonlinear_times, precision)}")
    return "\n".join(lines)


def format_sweep_summary(table: SweepTable, best: SweepCell | None = None) -> str:
    """One-paragraph sweep summary with the best cell."""
    n_missing = sum(cell.missing for cell in table.cells)
    lines = [
        f"Sweep of {len(table)} cells ({n_missing} missing)",
        "=" * 40,
    ]
    if best is None:
        lines.append("No cell with positive mean VPT")
    else:
        p = best.params
        dt2 = "-" if p.dt2 is None else f"{p.dt2:g}"
        lines.append(
            f"best: gamma={p.gamma:g} J={p.J:g} h={p.h:g} dt1={p.dt1:g} dt2={dt2}"
        )
        lines.append(
            f"mean VPT: {best.mean_vpt:.3f} steps, relative error: "
            f"{_fmt(best.rel_err, 3)}, realizations: {best.n_ok}"
        )
    return "\n".join(lines)
