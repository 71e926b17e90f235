"""Publication panels from simulator CSV outputs."""

from .errors import PlotKitError, SchemaError
from .panels import (
    PanelSpec,
    build_sweep_figure,
    build_timeseries_figure,
    fit_curve,
    load_fit,
    load_sweep,
    load_timeseries,
    read_columns,
    render_sweep,
    render_timeseries,
)

__version__ = "0.1.0"

__all__ = [
    "PanelSpec",
    "PlotKitError",
    "SchemaError",
    "build_sweep_figure",
    "build_timeseries_figure",
    "fit_curve",
    "load_fit",
    "load_sweep",
    "load_timeseries",
    "read_columns",
    "render_sweep",
    "render_timeseries",
    "__version__",
]
