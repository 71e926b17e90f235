"""Regenerates the six preset panels end to end.

The simulator is driven purely through its command line and file
formats: no simulator imports appear here.  Each preset's CSVs are
produced once per session, then rendered, then round-tripped through
the schema loaders.
"""

import subprocess

import pytest

from plotkit import (
    PanelSpec,
    build_sweep_figure,
    build_timeseries_figure,
    load_fit,
    load_sweep,
    load_timeseries,
    render_sweep,
    render_timeseries,
)

TIMESERIES_PRESETS = {
    "fig1a": "fidelity",
    "fig1b": "eof",
    "fig1c": "eof",
}
SWEEP_PRESETS = ("fig2a", "fig2b", "fig2c")


@pytest.fixture(scope="session")
def preset_dirs(tmp_path_factory):
    root = tmp_path_factory.mktemp("presets")
    dirs = {}
    for name in list(TIMESERIES_PRESETS) + list(SWEEP_PRESETS):
        out = root / name
        proc = subprocess.run(
            ["pstchain", "preset", name, "--out", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        dirs[name] = out
    return dirs


@pytest.mark.parametrize("name", sorted(TIMESERIES_PRESETS))
def test_timeseries_panels_have_one_curve_per_csv(name, preset_dirs, tmp_path):
    out_dir = preset_dirs[name]
    csvs = sorted(out_dir.glob(f"{name}_chi*.csv"))
    assert len(csvs) == 2
    metric = TIMESERIES_PRESETS[name]
    spec = PanelSpec(csv_paths=tuple(csvs), out_base=tmp_path / name,
                     metric=metric)
    fig = build_timeseries_figure(spec)
    assert len(fig.axes[0].lines) == 2
    written = render_timeseries(spec)
    for path in written:
        assert path.exists() and path.stat().st_size > 0
    # schema round-trip: every plotted CSV loads cleanly
    for path in csvs:
        curve = load_timeseries(path, metric)
        assert curve.x.size > 0


def test_single_csv_gives_a_single_curve(preset_dirs, tmp_path):
    csv_path = sorted(preset_dirs["fig1a"].glob("fig1a_chi*.csv"))[0]
    spec = PanelSpec(csv_paths=(csv_path,), out_base=tmp_path / "single")
    fig = build_timeseries_figure(spec)
    assert len(fig.axes[0].lines) == 1


@pytest.mark.parametrize("name", SWEEP_PRESETS)
def test_sweep_panels_include_the_fit_overlay(name, preset_dirs, tmp_path):
    out_dir = preset_dirs[name]
    csv_path = out_dir / f"{name}_sweep.csv"
    sidecar = out_dir / f"{name}_fit.yaml"
    assert csv_path.exists() and sidecar.exists()
    spec = PanelSpec(csv_paths=(csv_path,), out_base=tmp_path / name,
                     fit_paths={csv_path: sidecar})
    fig = build_sweep_figure(spec)
    dashed = [line for line in fig.axes[0].lines
              if line.get_linestyle() == "--"]
    assert len(dashed) == 1
    written = render_sweep(spec)
    for path in written:
        assert path.exists() and path.stat().st_size > 0
    curve = load_sweep(csv_path)
    assert curve.x.size == 10
    fit = load_fit(sidecar)
    assert fit["model"] in ("exponential", "gaussian")


def test_cli_renders_all_six_panels(preset_dirs, tmp_path):
    from plotkit.cli import main

    for name, metric in TIMESERIES_PRESETS.items():
        csvs = sorted(str(p) for p in preset_dirs[name].glob("*.csv"))
        code = main(["timeseries", "--csv", *csvs,
                     "--out", str(tmp_path / name), "--metric", metric])
        assert code == 0
    for name in SWEEP_PRESETS:
        csv_path = preset_dirs[name] / f"{name}_sweep.csv"
        code = main(["sweep", "--csv", str(csv_path),
                     "--out", str(tmp_path / name)])
        assert code == 0
    panels = sorted(tmp_path.glob("fig*.png"))
    assert len(panels) == 6
    assert len(sorted(tmp_path.glob("fig*.svg"))) == 6
