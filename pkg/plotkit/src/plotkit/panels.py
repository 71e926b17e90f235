"""Panel rendering from the simulator's CSV outputs.

Two panel kinds: time series (one curve per CSV, optional spread band
for ensemble files) and chain-length sweeps (error-bar scatter with an
optional fitted trend read from a YAML sidecar).  Inputs are read-only
and rendering is deterministic for fixed inputs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import yaml  # noqa: E402

from .errors import PlotKitError, SchemaError  # noqa: E402

FIGSIZE = (6.4, 4.0)
DPI = 150

_METRICS = ("fidelity", "eof")
_METRIC_LABELS = {"fidelity": "fidelity", "eof": "entanglement of formation"}
_FIT_MODELS = ("exponential", "gaussian")


@dataclass(frozen=True)
class PanelSpec:
    """What to draw and where to write it.

    ``out_base`` is the output path without extension; both a .png and
    an .svg are produced next to each other.  ``fit_paths`` maps a CSV
    path to its fit sidecar; CSVs without an entry get no overlay.
    """

    csv_paths: tuple[Path, ...]
    out_base: Path
    metric: str = "fidelity"
    title: str | None = None
    fit_paths: dict[Path, Path] = field(default_factory=dict)

    def __post_init__(self):
        if not self.csv_paths:
            raise PlotKitError("at least one input CSV is required")
        if self.metric not in _METRICS:
            raise PlotKitError(
                f"unknown metric {self.metric!r}; choose from {_METRICS}")


def read_columns(path: Path) -> dict[str, np.ndarray]:
    """Parse a CSV into named float columns.

    Raises SchemaError for an empty file, a header-only file, ragged
    rows, or non-numeric fields.
    """
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise PlotKitError(f"cannot read {path}: {exc}") from exc
    rows = [row for row in rows if row]
    if not rows:
        raise SchemaError(f"{path.name} is empty")
    header = [name.strip() for name in rows[0]]
    body = rows[1:]
    if not body:
        raise SchemaError(f"{path.name} has a header but no data rows")
    columns = {name: [] for name in header}
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise SchemaError(
                f"{path.name} line {lineno} has {len(row)} fields, "
                f"expected {len(header)}")
        for name, value in zip(header, row):
            try:
                columns[name].append(float(value))
            except ValueError:
                raise SchemaError(
                    f"{path.name} line {lineno} has non-numeric "
                    f"value {value!r} in column {name!r}") from None
    return {name: np.asarray(vals) for name, vals in columns.items()}


def _require(columns: dict, needed: set[str], path: Path) -> None:
    missing = needed - set(columns)
    if missing:
        raise SchemaError(
            f"{path.name} is missing columns: {', '.join(sorted(missing))}")


@dataclass(frozen=True)
class Curve:
    label: str
    x: np.ndarray
    y: np.ndarray
    band: np.ndarray | None


def load_timeseries(path: Path, metric: str) -> Curve:
    """One curve from either a single-run or an ensemble time series.

    Single runs carry ``fidelity``/``eof`` columns; ensembles carry
    ``mean_*`` and ``std_*`` pairs, which become a spread band.
    """
    path = Path(path)
    columns = read_columns(path)
    _require(columns, {"t_over_ts"}, path)
    if metric in columns:
        return Curve(path.stem, columns["t_over_ts"], columns[metric], None)
    mean_key, std_key = f"mean_{metric}", f"std_{metric}"
    _require(columns, {mean_key, std_key}, path)
    return Curve(path.stem, columns["t_over_ts"],
                 columns[mean_key], columns[std_key])


def load_sweep(path: Path) -> Curve:
    path = Path(path)
    columns = read_columns(path)
    _require(columns, {"N", "mean", "std"}, path)
    return Curve(path.stem, columns["N"], columns["mean"], columns["std"])


def load_fit(path: Path) -> dict:
    path = Path(path)
    try:
        with open(path) as fh:
            payload = yaml.safe_load(fh)
    except OSError as exc:
        raise PlotKitError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise SchemaError(f"{path.name} is not valid YAML: {exc}") from exc
    if not isinstance(payload, dict):
        raise SchemaError(f"{path.name} does not hold a mapping")
    missing = {"model", "amplitude", "scale"} - set(payload)
    if missing:
        raise SchemaError(
            f"{path.name} is missing keys: {', '.join(sorted(missing))}")
    if payload["model"] not in _FIT_MODELS:
        raise SchemaError(
            f"{path.name} has unknown model {payload['model']!r}")
    return payload


def fit_curve(fit: dict, x: np.ndarray) -> np.ndarray:
    """Evaluate a sidecar trend on a grid."""
    amplitude = float(fit["amplitude"])
    scale = float(fit["scale"])
    if fit["model"] == "exponential":
        return amplitude * np.exp(-scale * x)
    return amplitude * np.exp(-((x / scale) ** 2))


def build_timeseries_figure(spec: PanelSpec):
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    for path in spec.csv_paths:
        curve = load_timeseries(Path(path), spec.metric)
        ax.plot(curve.x, curve.y, label=curve.label, linewidth=1.2)
        if curve.band is not None:
            ax.fill_between(curve.x, curve.y - curve.band,
                            curve.y + curve.band, alpha=0.25)
    ax.set_xlabel("t / t_S")
    ax.set_ylabel(_METRIC_LABELS[spec.metric])
    ax.set_ylim(bottom=0.0)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="best", fontsize="small")
    fig.tight_layout()
    return fig


def build_sweep_figure(spec: PanelSpec):
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    for path in spec.csv_paths:
        path = Path(path)
        curve = load_sweep(path)
        ax.errorbar(curve.x, curve.y, yerr=curve.band, fmt="o",
                    capsize=3, markersize=4, label=curve.label)
        sidecar = spec.fit_paths.get(path)
        if sidecar is not None:
            fit = load_fit(sidecar)
            grid = np.linspace(curve.x.min(), curve.x.max(), 200)
            ax.plot(grid, fit_curve(fit, grid), linestyle="--",
                    linewidth=1.0, label=f"{curve.label} fit "
                    f"({fit['model']})")
    ax.set_xlabel("chain length N")
    ax.set_ylabel("observable at first revival")
    ax.set_ylim(bottom=0.0)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="best", fontsize="small")
    fig.tight_layout()
    return fig


def _save(fig, out_base: Path) -> list[Path]:
    out_base = Path(out_base)
    out_base.parent.mkdir(parents=True, exist_ok=True)
    written = []
    with plt.rc_context({"svg.hashsalt": "plotkit"}):
        for suffix in (".png", ".svg"):
            target = out_base.with_suffix(suffix)
            # a fixed date keeps reruns byte-identical
            fig.savefig(target, metadata={"Date": None})
            written.append(target)
    plt.close(fig)
    return written


def render_timeseries(spec: PanelSpec) -> list[Path]:
    """Write the time-series panel; returns the files produced."""
    return _save(build_timeseries_figure(spec), spec.out_base)


def render_sweep(spec: PanelSpec) -> list[Path]:
    """Write the sweep panel; returns the files produced."""
    return _save(build_sweep_figure(spec), spec.out_base)
