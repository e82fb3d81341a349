"""Figure generation for benchmark CSVs."""

from .render import PlotSpec, SchemaError, load_mean_series, moving_mean, render, smoothed_series

__all__ = ["PlotSpec", "SchemaError", "load_mean_series", "moving_mean", "render", "smoothed_series"]
