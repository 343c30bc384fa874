"""
qrclab I/O Module.

This module contains CSV and JSON emitters, loaders and run manifests.
"""


# Lazy import heavy modules to improve startup time
def __getattr__(name):  # type: ignore[no-untyped-def]
    if name in [
        "build_manifest",
        "format_sweep_summary",
        "format_vpt_report",
        "library_versions",
    ]:
        from qrclab.io.data_export import (
            build_manifest,
            format_sweep_summary,
            format_vpt_report,
            library_versions,
        )

        globals().update(
            {
                "build_manifest": build_manifest,
                "format_sweep_summary": format_sweep_summary,
                "format_vpt_report": format_vpt_report,
                "library_versions": library_versions,
            }
        )
        return globals()[name]
    elif name in [
        "load_trajectory_csv",
        "read_json",
        "write_bifurcation_csv",
        "write_forecast_csv",
        "write_heatmap_csv",
        "write_json",
        "write_table_csv",
        "write_trajectory_csv",
    ]:
        from qrclab.io import file_operations

        value = getattr(file_operations, name)
        globals()[name] = value
        return value
    raise AttributeError(f"module '{__name__}' has no attribute '{name}'")


__all__ = [
    "build_manifest",
    "format_sweep_summary",
    "format_vpt_report",
    "library_versions",
    "load_trajectory_csv",
    "read_json",
    "write_bifurcation_csv",
    "write_forecast_csv",
    "write_heatmap_csv",
    "write_json",
    "write_table_csv",
    "write_trajectory_csv",
]
