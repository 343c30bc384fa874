#!/usr/bin/env python3
"""
Command Line Interface for qrclab.

This module ties the library together: it integrates the benchmark systems,
scans bifurcations, trains and scores the hybrid reservoir forecaster, runs
hyperparameter sweeps and estimates Lyapunov exponents. Every command writes
its results plus a ``manifest.json`` into the output directory.

Available Commands:
    generate        Integrate a benchmark system and write its trajectory
    bifurcation     Kinetic-energy extrema of the NS5 model versus forcing
    train-forecast  Train the readout, forecast the test horizon, report VPT
    sweep           Grid search over memory, Hamiltonian and evolution times
    lyapunov        Leading Lyapunov exponent and Lyapunov time

Configuration precedence: built-in defaults < ``--config`` JSON < flags. A
manifest written by any command is accepted as ``--config`` and reproduces
the run.
"""

# ruff: noqa: I001

import argparse
from dataclasses import replace
import sys
from pathlib import Path
from textwrap import dedent
from typing import Any

# Heavy modules (numpy, pandas, the library sub-packages) are imported
# lazily inside the command handlers to keep --help fast
from qrclab import __version__
from qrclab.config import RunConfig, load_run_config
from qrclab.logging_utils import configure_logging, get_logger, log_environment

INTERRUPTED_EXIT_CODE = 130

MANIFEST_NAME = "manifest.json"


def create_parser() -> argparse.ArgumentParser:
    """Create the main argument parser with all subcommands."""
    parser = argparse.ArgumentParser(
        prog="qrclab",
        description="Hybrid quantum-classical reservoir computing for chaotic forecasting",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=dedent("""
        Examples:
          # Chaotic NS5 trajectory at F = 33
          qrclab generate --system ns5 --forcing 33 --out runs/ns5

          # Bifurcation map over the default range [22, 35]
          qrclab bifurcation --workers 4 --out runs/bif

          # Train and forecast Lorenz-63 with a stored Lyapunov time
          qrclab lyapunov --system lorenz63 --out runs/lor
          qrclab train-forecast --system lorenz63 --config run.json --out runs/lor

          # Evolution-time heatmap of a sweep
          qrclab sweep --system lorenz63 --axes dt1,dt2 --workers 8 --out runs/sweep

        For more detailed help on specific commands, use:
          qrclab <command> --help
        """),
    )

    parser.add_argument("--version", action="version", version=f"qrclab {__version__}")

    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Enable debug-level logging"
    )

    parser.add_argument(
        "--debug",
        action="store_true",
        help="Enable debug mode for detailed error information",
    )

    subparsers = parser.add_subparsers(
        dest="command", help="Available commands", metavar="COMMAND"
    )

    add_generate_command(subparsers)
    add_bifurcation_command(subparsers)
    add_train_forecast_command(subparsers)
    add_sweep_command(subparsers)
    add_lyapunov_command(subparsers)

    return parser


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags shared by every subcommand; unset flags leave the config alone."""
    parser.add_argument("--config", help="JSON run configuration (or a manifest)")
    parser.add_argument("--out", help="Output directory (default: qrclab-output)")
    parser.add_argument("--seed", type=_parse_seed, help="Master seed (unsigned 64-bit)")
    parser.add_argument("--workers", type=_parse_workers, help="Worker processes")
    parser.add_argument(
        "--system", choices=["ns5", "lorenz63"], help="Benchmark system (default: ns5)"
    )
    parser.add_argument("--forcing", type=float, help="NS5 forcing amplitude F")
    parser.add_argument(
        "--variant",
        choices=["as_written", "conserving"],
        help="NS5 second-triad coefficients (default: conserving)",
    )
    parser.add_argument(
        "--nonlinear-scale",
        type=float,
        help=(
            "NS5 factor on the quadratic terms "
            "(default: 1; sqrt(5) for the classical normalisation)"
        ),
    )
    parser.add_argument(
        "--debug",
        action="store_true",
        default=argparse.SUPPRESS,
        help="Enable debug mode for detailed error information",
    )


def add_generate_command(subparsers: Any) -> None:
    """Add the 'generate' subcommand."""
    parser = subparsers.add_parser(
        "generate",
        help="Integrate a benchmark system and write its trajectory",
        description=(
            "Integrate the configured system with the adaptive Dormand-Prince "
            "method, discard the transient and write the sampled trajectory"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=dedent("""
        Outputs:
          trajectory.csv      t followed by one column per component
          phase_portrait.csv  t, E, dE_dt (NS5 only)
          manifest.json       resolved configuration, seeds and versions

        Examples:
          qrclab generate --system ns5 --forcing 33
          qrclab generate --system ns5 --forcing 28.718
          qrclab generate --system lorenz63
        """),
    )
    _add_common_arguments(parser)


def add_bifurcation_command(subparsers: Any) -> None:
    """Add the 'bifurcation' subcommand."""
    parser = subparsers.add_parser(
        "bifurcation",
        help="Kinetic-energy extrema of the NS5 model versus forcing",
        description=(
            "Record the local extrema of the kinetic energy after a transient "
            "for every forcing value"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=dedent("""
        Outputs:
          bifurcation.csv  F,extremum pairs (empty in the fixed-point regime)

        Examples:
          # Default range [22, 35] with 131 values
          qrclab bifurcation --workers 4

          # Single forcing value
          qrclab bifurcation --forcing 24
        """),
    )
    _add_common_arguments(parser)


def add_train_forecast_command(subparsers: Any) -> None:
    """Add the 'train-forecast' subcommand."""
    parser = subparsers.add_parser(
        "train-forecast",
        help="Train the readout, forecast the test horizon and report the VPT",
        description=(
            "Teacher-forced training of the ridge readout followed by a "
            "closed-loop forecast scored with the valid prediction time"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=dedent("""
        Outputs:
          model.json     trained model (Hamiltonian, reservoir, readout, normalization)
          forecast.csv   step, t and predicted/true value of every component
          manifest.json  configuration plus the VPT in every available unit

        Set metric.lyapunov_file to the lyapunov.json written by the
        'lyapunov' command to report the VPT in Lyapunov times.

        Examples:
          qrclab train-forecast --system ns5 --forcing 33
          qrclab train-forecast --system lorenz63 --seed 7
        """),
    )
    _add_common_arguments(parser)


def add_sweep_command(subparsers: Any) -> None:
    """Add the 'sweep' subcommand."""
    parser = subparsers.add_parser(
        "sweep",
        help="Hyperparameter grid search with heatmap export",
        description=(
            "Train, forecast and score every realization of every grid cell; "
            "results are identical for any worker count"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=dedent("""
        Outputs:
          sweep_results.csv                 one row per cell
          heatmap_mean_vpt_<a>_<b>.csv      mean VPT over the two axes
          heatmap_rel_err_<a>_<b>.csv       relative error over the two axes

        Axes: gamma, J, h, dt1, dt2

        Examples:
          qrclab sweep --axes dt1,dt2 --workers 8
          qrclab sweep --axes J,h --workers 8
        """),
    )
    _add_common_arguments(parser)
    parser.add_argument(
        "--axes", type=_parse_axes, help="Heatmap axes as 'row,column' (default: dt1,dt2)"
    )


def add_lyapunov_command(subparsers: Any) -> None:
    """Add the 'lyapunov' subcommand."""
    parser = subparsers.add_parser(
        "lyapunov",
        help="Leading Lyapunov exponent and Lyapunov time",
        description=(
            "Estimate the leading Lyapunov exponent with periodic "
            "renormalization of a nearby trajectory"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=dedent("""
        Outputs:
          lyapunov.json  exponent, Lyapunov time and renormalization settings

        The horizon must cover at least 100 renormalization intervals.

        Examples:
          qrclab lyapunov --system lorenz63
          qrclab lyapunov --system ns5 --forcing 33 --out runs/ns5
        """),
    )
    _add_common_arguments(parser)


def _parse_seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _parse_workers(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid worker count: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("worker count must be at least 1")
    return value


def _parse_axes(text: str) -> list[str]:
    from qrclab.data_handling.sweep import AXES

    axes = [part.strip() for part in text.split(",") if part.strip()]
    if len(axes) != 2 or axes[0] == axes[1]:
        raise argparse.ArgumentTypeError("expected two different axes as 'a,b'")
    unknown = [a for a in axes if a not in AXES]
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown axis {unknown[0]!r}; choose from {', '.join(AXES)}"
        )
    return axes


def _resolve_config(args: Any) -> RunConfig:
    """Defaults, then the JSON file, then the command-line flags."""
    config = load_run_config(getattr(args, "config", None))
    return config.with_overrides(
        system=getattr(args, "system", None),
        forcing=getattr(args, "forcing", None),
        variant=getattr(args, "variant", None),
        nonlinear_scale=getattr(args, "nonlinear_scale", None),
        seed=getattr(args, "seed", None),
        workers=getattr(args, "workers", None),
        output_dir=getattr(args, "out", None),
        axes=getattr(args, "axes", None),
    ).resolved()


def _report_error(args: Any, exc: BaseException) -> int:
    if getattr(args, "debug", False):
        import traceback

        print("Debug: Full traceback:", file=sys.stderr)
        traceback.print_exc()
    print(f"Error: {exc}", file=sys.stderr)
    return 1


def _batch_config(config: RunConfig) -> Any:
    from qrclab.data_handling.batch_processing import BatchConfig

    return BatchConfig(max_workers=config.workers, enable_progress=sys.stderr.isatty())


def _initial_state(config: RunConfig, system: Any) -> Any:
    if config.integrator.initial_state is not None:
        return config.integrator.initial_state
    return system.initial_state(config.seed)


def _load_or_generate(config: RunConfig, system: Any) -> Any:
    """
    Trajectory of exactly ``integrator.n_samples`` rows.

    A configured ``dataset.trajectory`` CSV is loaded instead of integrating.
    """
    from qrclab.dynamics.integrator import integrate
    from qrclab.exceptions import ValidationError
    from qrclab.io.file_operations import load_trajectory_csv

    settings = config.integrator
    if config.dataset.trajectory is not None:
        return load_trajectory_csv(config.dataset.trajectory)

    n_samples = int(settings.n_samples)  # type: ignore[arg-type]
    dt_sample = float(settings.dt_sample)  # type: ignore[arg-type]
    transient = float(settings.transient)
    traj = integrate(
        system.rhs,
        _initial_state(config, system),
        transient + (n_samples - 1) * dt_sample,
        settings.build(),
        dt_sample=dt_sample,
        sample_from=transient,
        component_names=system.component_names,
    )
    if traj.n_steps < n_samples:
        raise ValidationError(
            "Integration produced fewer samples than requested",
            parameter="n_samples",
            value=(traj.n_steps, n_samples),
        )
    return traj.segment(0, n_samples)


def _write_manifest(
    config: RunConfig,
    command: str,
    outputs: list[str],
    *,
    seeds: dict[str, Any] | None = None,
    derived: dict[str, Any] | None = None,
) -> Path:
    from qrclab.io.data_export import build_manifest
    from qrclab.io.file_operations import write_json

    manifest = build_manifest(
        command,
        config.to_dict(),
        seeds={"master_seed": config.seed, **(seeds or {})},
        derived=derived,
        outputs=[*outputs, MANIFEST_NAME],
    )
    return write_json(manifest, Path(config.output_dir) / MANIFEST_NAME)


def cmd_generate(args: Any) -> int:
    """Handle the 'generate' command."""
    try:
        import pandas as pd

        from qrclab.dynamics.systems import NS5System, energy_phase_portrait
        from qrclab.io.file_operations import write_table_csv, write_trajectory_csv

        config = _resolve_config(args)
        system = config.system.build()
        out_dir = Path(config.output_dir)

        traj = _load_or_generate(config, system)
        outputs = [write_trajectory_csv(traj, out_dir / "trajectory.csv").name]
        if isinstance(system, NS5System):
            portrait = energy_phase_portrait(traj, system)
            frame = pd.DataFrame(
                {"t": traj.times, "E": portrait[:, 0], "dE_dt": portrait[:, 1]}
            )
            outputs.append(write_table_csv(frame, out_dir / "phase_portrait.csv").name)

        _write_manifest(
            config,
            "generate",
            outputs,
            derived={
                "n_samples": traj.n_steps,
                "t_start": float(traj.times[0]),
                "t_end": float(traj.times[-1]),
            },
        )
        print(f"Wrote {traj.n_steps} samples of {system.name} to {out_dir}")
        return 0

    except Exception as e:
        return _report_error(args, e)


def cmd_bifurcation(args: Any) -> int:
    """Handle the 'bifurcation' command."""
    try:
        from qrclab.dynamics.bifurcation import bifurcation_map
        from qrclab.dynamics.systems import NS5System
        from qrclab.exceptions import ValidationError
        from qrclab.io.file_operations import write_bifurcation_csv

        config = _resolve_config(args)
        system = config.system.build()
        if not isinstance(system, NS5System):
            raise ValidationError(
                "Bifurcation maps are defined for the ns5 system", "system", system.name
            )

        # --forcing narrows the scan to one column
        if getattr(args, "forcing", None) is not None:
            config = replace(
                config,
                bifurcation=replace(config.bifurcation, f_values=[float(args.forcing)]),
            )
        settings = config.bifurcation
        f_values = settings.forcing_values()

        result = bifurcation_map(
            f_values,
            settings.transient,
            settings.window,
            system=system,
            integrator=config.integrator.build(),
            dt_sample=float(config.integrator.dt_sample),  # type: ignore[arg-type]
            seed=config.seed,
            batch=_batch_config(config),
        )

        out_dir = Path(config.output_dir)
        outputs = [write_bifurcation_csv(result, out_dir / "bifurcation.csv").name]
        _write_manifest(
            config,
            "bifurcation",
            outputs,
            derived={
                "forcing_values": f_values,
                "n_extrema": len(result),
                "failures": result.failures,
            },
        )

        if len(result) == 0:
            print(
                "Warning: no extrema recorded (fixed-point regime); "
                "bifurcation.csv holds only its header",
                file=sys.stderr,
            )
        for forcing, error in result.failures.items():
            print(f"Warning: F={forcing:g} failed: {error}", file=sys.stderr)
        print(f"Recorded {len(result)} extrema over {len(f_values)} forcing values")
        return 0

    except Exception as e:
        return _report_error(args, e)


def _lyapunov_time(config: RunConfig) -> float | None:
    """Explicit Lyapunov time, else the one stored by the 'lyapunov' command."""
    from qrclab.io.file_operations import read_json

    metric = config.metric
    if metric.lyapunov_time is not None:
        return float(metric.lyapunov_time)
    if metric.lyapunov_file is None:
        return None
    payload = read_json(metric.lyapunov_file)
    value = payload.get("lyapunov_time")
    if value is None:
        value = payload.get("derived", {}).get("lyapunov_time")
    return None if value is None else float(value)


def _nonlinear_time(config: RunConfig, traj: Any) -> float | None:
    from qrclab.dynamics.spectral import nonlinear_times
    from qrclab.exceptions import SpectralError, ValidationError

    if not config.metric.nonlinear_times:
        return None
    logger = get_logger("cli")
    try:
        return float(max(nonlinear_times(traj)))
    except (SpectralError, ValidationError) as e:
        logger.warning("Nonlinear times unavailable", extra={"error": str(e)})
        return None


def _build_pipeline(config: RunConfig) -> tuple[Any, Any, Any]:
    """Hamiltonian template, evolution times and reservoir of a run."""
    from qrclab.quantum.evolution import EvolutionConfig
    from qrclab.quantum.hamiltonian import HamiltonianTemplate
    from qrclab.quantum.observables import feature_length
    from qrclab.reservoir.memory import ReservoirConfig

    quantum = config.quantum
    template = HamiltonianTemplate(
        quantum.coupling, quantum.transverse_field, quantum.n_qubits, quantum.input_scale
    )
    evolution = EvolutionConfig(tuple(quantum.times or ()))
    reservoir = ReservoirConfig.for_features(
        feature_length(quantum.n_qubits, evolution.n_times),
        config.reservoir.gamma,
        config.reservoir.shift,
        config.reservoir.length_multiple,
    )
    return template, evolution, reservoir


def _make_dataset(config: RunConfig, traj: Any) -> Any:
    from qrclab.forecasting.dataset import make_dataset

    return make_dataset(
        traj,
        config.dataset.n_train,
        config.dataset.n_washout,
        int(config.dataset.n_test or 0),
    )


def cmd_train_forecast(args: Any) -> int:
    """Handle the 'train-forecast' command."""
    try:
        from qrclab.forecasting.forecaster import evaluate, train
        from qrclab.forecasting.metrics import MetricConfig
        from qrclab.io.data_export import format_vpt_report
        from qrclab.io.file_operations import write_forecast_csv, write_json

        config = _resolve_config(args)
        system = config.system.build()
        traj = _load_or_generate(config, system)
        data = _make_dataset(config, traj)
        template, evolution, reservoir = _build_pipeline(config)

        model = train(
            data,
            template,
            evolution,
            reservoir,
            config.readout.ridge_lambda,
            seed=config.seed,
        )
        result = evaluate(
            model,
            data,
            MetricConfig(config.metric.epsilon),
            lyapunov_time=_lyapunov_time(config),
            nonlinear_time=_nonlinear_time(config, traj),
        )

        out_dir = Path(config.output_dir)
        outputs = [
            write_json(model.to_dict(), out_dir / "model.json").name,
            write_forecast_csv(result, out_dir / "forecast.csv").name,
        ]
        _write_manifest(
            config,
            "train-forecast",
            outputs,
            seeds={"coupling_seed": config.seed},
            derived={
                "vpt": result.vpt.to_dict(),
                "train_rmse": model.train_rmse,
                "baseline_rmse": model.baseline_rmse,
                "readout_relative_residual": model.readout.relative_residual,
            },
        )
        print(format_vpt_report(result.vpt))
        return 0

    except Exception as e:
        return _report_error(args, e)


def cmd_sweep(args: Any) -> int:
    """Handle the 'sweep' command."""
    try:
        from qrclab.data_handling.sweep import (
            SweepGrid,
            SweepTask,
            export_heatmap,
            run_sweep,
            select_best,
        )
        from qrclab.exceptions import SweepError, SweepInterrupted
        from qrclab.io.data_export import format_sweep_summary
        from qrclab.io.file_operations import write_heatmap_csv, write_table_csv

        config = _resolve_config(args)
        system = config.system.build()
        traj = _load_or_generate(config, system)
        data = _make_dataset(config, traj)

        settings = config.sweep
        grid = SweepGrid(
            gamma_values=tuple(settings.gamma_values),
            j_values=tuple(settings.j_values),
            h_values=tuple(settings.h_values),
            dt1_values=tuple(settings.dt1_values),
            dt2_values=tuple(settings.dt2_values),
            n_realizations=settings.n_realizations,
            master_seed=config.seed,
            multiplexed=settings.multiplexed,
        )
        task = SweepTask(
            data,
            ridge_lambda=config.readout.ridge_lambda,
            shift=config.reservoir.shift,
            length_multiple=config.reservoir.length_multiple,
            epsilon=config.metric.epsilon,
            n_qubits=config.quantum.n_qubits,
            input_scale=config.quantum.input_scale,
        )

        out_dir = Path(config.output_dir)
        results_path = out_dir / "sweep_results.csv"
        try:
            table = run_sweep(grid, task, _batch_config(config))
        except SweepInterrupted as e:
            write_table_csv(e.partial.to_frame(), results_path)
            _write_manifest(
                config,
                "sweep",
                [results_path.name],
                derived={"interrupted": True},
            )
            print(
                f"Error: {e}; partial results written to {results_path}",
                file=sys.stderr,
            )
            return INTERRUPTED_EXIT_CODE

        outputs = [write_table_csv(table.to_frame(), results_path).name]
        row_axis, col_axis = settings.axes
        for value in ("mean_vpt", "rel_err"):
            heatmap = export_heatmap(
                table,
                (row_axis, col_axis),
                settings.fixed,  # type: ignore[arg-type]
                value,  # type: ignore[arg-type]
                settings.heatmap_reduce,  # type: ignore[arg-type]
            )
            name = f"heatmap_{value}_{row_axis}_{col_axis}.csv"
            outputs.append(write_heatmap_csv(heatmap, out_dir / name).name)

        try:
            best = select_best(table)
        except SweepError:
            best = None
        _write_manifest(
            config,
            "sweep",
            outputs,
            seeds={
                "derivation": "SeedSequence([master_seed, cell_index, realization])",
                "n_realizations": grid.n_realizations,
            },
            derived={"best": None if best is None else best.to_row()},
        )
        print(format_sweep_summary(table, best))
        return 0

    except Exception as e:
        return _report_error(args, e)


def cmd_lyapunov(args: Any) -> int:
    """Handle the 'lyapunov' command."""
    try:
        from qrclab.constants import MIN_RENORMALIZATIONS
        from qrclab.dynamics.lyapunov import lyapunov_exponent
        from qrclab.io.file_operations import write_json

        config = _resolve_config(args)
        system = config.system.build()
        settings = config.lyapunov

        result = lyapunov_exponent(
            system.rhs,
            _initial_state(config, system),
            settings.horizon,
            settings.renorm_dt,
            settings.d0,
            transient=settings.transient,
            cfg=config.integrator.build(),
            min_renormalizations=MIN_RENORMALIZATIONS,
        )

        out_dir = Path(config.output_dir)
        payload = {**result.to_dict(), "system": system.to_dict()}
        outputs = [write_json(payload, out_dir / "lyapunov.json").name]
        _write_manifest(config, "lyapunov", outputs, derived=result.to_dict())

        print(f"Leading Lyapunov exponent: {result.exponent:.6f}")
        if result.lyapunov_time is None:
            print(
                "Warning: exponent is not positive; the Lyapunov time is undefined",
                file=sys.stderr,
            )
        else:
            print(f"Lyapunov time: {result.lyapunov_time:.6f}")
        return 0

    except Exception as e:
        return _report_error(args, e)


def main(argv: list[str] | None = None) -> int:
    """Execute the main CLI application."""
    configure_logging()
    logger = get_logger("cli")
    log_environment(logger, component="cli")

    parser = create_parser()

    import time

    started = time.perf_counter()

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # Handle argparse sys.exit calls gracefully in tests
        if e.code == 0:  # --help or --version
            raise
        return 1

    if args.verbose:
        configure_logging(level="DEBUG", force=True)

    if getattr(args, "debug", False):
        print(
            "Debug mode enabled - detailed error information will be shown",
            file=sys.stderr,
        )

    if not args.command:
        parser.print_help()
        return 1

    command_handlers = {
        "generate": cmd_generate,
        "bifurcation": cmd_bifurcation,
        "train-forecast": cmd_train_forecast,
        "sweep": cmd_sweep,
        "lyapunov": cmd_lyapunov,
    }

    handler = command_handlers.get(args.command)
    if handler:
        logger.info("Starting command", extra={"command": args.command})
        try:
            rc = handler(args)
        except Exception as exc:
            logger.exception("Command failed", extra={"command": args.command})
            if getattr(args, "debug", False):
                raise
            print(f"Error running {args.command}: {exc}", file=sys.stderr)
            return 1
        duration_s = time.perf_counter() - started
        logger.info(
            "Command finished",
            extra={
                "command": args.command,
                "status": rc,
                "duration_s": round(duration_s, 4),
            },
        )
        return rc
    else:
        print(f"Unknown command: {args.command}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
