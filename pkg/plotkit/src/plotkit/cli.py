"""Command line front end: plotkit <panel-kind> --csv ... --out PATH."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import PlotKitError
from .panels import PanelSpec, render_sweep, render_timeseries


def _out_base(raw: str) -> Path:
    path = Path(raw)
    if path.suffix.lower() in (".png", ".svg"):
        return path.with_suffix("")
    return path


def _discover_sidecar(csv_path: Path) -> Path | None:
    """fig2a_sweep.csv -> fig2a_fit.yaml, sweep.csv -> sweep_fit.yaml."""
    stem = csv_path.stem
    if stem.endswith("_sweep"):
        stem = stem[: -len("_sweep")]
    candidate = csv_path.with_name(f"{stem}_fit.yaml")
    return candidate if candidate.exists() else None


def _spec_from_args(args) -> PanelSpec:
    csv_paths = tuple(Path(p) for p in args.csv)
    fit_paths: dict[Path, Path] = {}
    if args.panel == "sweep" and not args.no_fit:
        if args.fit is not None:
            if len(csv_paths) != 1:
                raise PlotKitError(
                    "--fit applies to a single CSV; got "
                    f"{len(csv_paths)} inputs")
            fit_paths[csv_paths[0]] = Path(args.fit)
        else:
            for path in csv_paths:
                sidecar = _discover_sidecar(path)
                if sidecar is not None:
                    fit_paths[path] = sidecar
    return PanelSpec(
        csv_paths=csv_paths,
        out_base=_out_base(args.out),
        metric=getattr(args, "metric", "fidelity"),
        title=args.title,
        fit_paths=fit_paths,
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render PNG and SVG panels from simulator CSV files.")
    sub = parser.add_subparsers(dest="panel", required=True)

    timeseries = sub.add_parser(
        "timeseries", help="one curve per time-series or ensemble CSV")
    timeseries.add_argument("--csv", nargs="+", required=True,
                            help="input CSV files, one curve each")
    timeseries.add_argument("--out", required=True,
                            help="output path; extension is replaced")
    timeseries.add_argument("--metric", choices=("fidelity", "eof"),
                            default="fidelity")
    timeseries.add_argument("--title", default=None)

    sweep = sub.add_parser(
        "sweep", help="error-bar scatter over chain length, optional fit")
    sweep.add_argument("--csv", nargs="+", required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--fit", default=None,
                       help="fit sidecar YAML (default: discovered next "
                            "to the CSV)")
    sweep.add_argument("--no-fit", action="store_true",
                       help="skip fit overlays even when sidecars exist")
    sweep.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = _spec_from_args(args)
        if args.panel == "timeseries":
            written = render_timeseries(spec)
        else:
            written = render_sweep(spec)
    except PlotKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print("wrote " + ", ".join(str(path) for path in written))
    return 0


if __name__ == "__main__":
    sys.exit(main())
