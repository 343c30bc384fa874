"""
End-to-end forecasting pipeline.

Dataset segmentation and normalization, teacher-forced training of the
hybrid reservoir, closed-loop forecasting and the valid-prediction-time
metric.
"""

from qrclab.forecasting.dataset import DatasetSpec, Normalization, make_dataset
from qrclab.forecasting.forecaster import (
    ForecastModel,
    ForecastResult,
    evaluate,
    forecast,
    train,
)
from qrclab.forecasting.metrics import MetricConfig, VPTResult, normalized_error, vpt

__all__ = [
    "DatasetSpec",
    "ForecastModel",
    "ForecastResult",
    "MetricConfig",
    "Normalization",
    "VPTResult",
    "evaluate",
    "forecast",
    "make_dataset",
    "normalized_error",
    "train",
    "vpt",
]
