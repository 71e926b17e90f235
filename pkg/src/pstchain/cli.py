"""Command line interface.

Four subcommands: ``run`` (single realisation time series), ``ensemble``
(mean and spread over realisations), ``sweep`` (probe statistics against
chain length plus a trend fit) and ``preset`` (canned configurations for
the standard panels).  Every invocation writes CSV files plus a
``manifest.yaml`` recording the resolved configuration, seed, emitted
files and wall time; the manifest is written last, so its presence marks
a complete run.  Numeric CSV fields carry 13 significant digits, which
makes repeated runs byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import numbers
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import yaml

from . import __version__, kernels
from .ensemble import (EnsembleSummary, ExperimentConfig, ProbeTime,
                       SweepResult, TrendModel, fit_trend, run_ensemble,
                       run_realization, sweep_chain_length)
from .errors import ConfigurationError, FitError, PstChainError
from .hamiltonian import PerturbationSpec
from .hilbert import InputKind

_ALIASES = {"N": "chain_length", "realizations": "realisations"}
_KNOWN_KEYS = {
    "chain_length", "input", "custom_terms", "max_excitations", "j0",
    "profile", "eta", "epsilon", "gamma", "delta", "chi", "seed",
    "chi_cross_sector", "chi_diagonal", "grid_points", "t_max_over_ts",
    "grid_times_over_ts", "fidelity_target", "eof_sites", "realisations",
    "sweep_n", "probe",
}


def _expect_number(data: dict, key: str, default):
    value = data.get(key, default)
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ConfigurationError(f"config key {key!r} must be a number, got {value!r}")
    return float(value)


def _expect_int(data: dict, key: str, default):
    value = data.get(key, default)
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ConfigurationError(f"config key {key!r} must be an integer, got {value!r}")
    return int(value)


def _expect_bool(data: dict, key: str, default):
    value = data.get(key, default)
    if not isinstance(value, bool):
        raise ConfigurationError(f"config key {key!r} must be a boolean, got {value!r}")
    return value


def _parse_bits(label, n_sites: int) -> tuple[int, ...]:
    if not isinstance(label, str) or len(label) != n_sites \
            or any(ch not in "01" for ch in label):
        raise ConfigurationError(
            f"custom term state must be a string of {n_sites} 0/1 characters, "
            f"got {label!r}")
    return tuple(int(ch) for ch in label)


def _parse_amplitude(value) -> complex:
    if isinstance(value, bool):
        raise ConfigurationError(f"custom term amplitude must be a number, got {value!r}")
    if isinstance(value, numbers.Real):
        return complex(float(value), 0.0)
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(v, numbers.Real) and not isinstance(v, bool)
                    for v in value)):
        return complex(float(value[0]), float(value[1]))
    raise ConfigurationError(
        f"custom term amplitude must be a number or [re, im] pair, got {value!r}")


def parse_config(text: str) -> ExperimentConfig:
    """Parse a YAML config document into an ExperimentConfig.

    Unknown keys are rejected rather than ignored, so typos surface
    immediately.
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"config is not valid YAML: {exc}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError("config must be a YAML mapping")
    data = {_ALIASES.get(k, k): v for k, v in data.items()}
    unknown = sorted(set(data) - _KNOWN_KEYS)
    if unknown:
        raise ConfigurationError(f"unknown config key(s): {', '.join(unknown)}")
    if "chain_length" not in data:
        raise ConfigurationError("config key 'chain_length' (alias 'N') is required")
    chain_length = _expect_int(data, "chain_length", None)

    input_label = data.get("input", "TypeI")
    custom_terms = None
    input_kind = None
    if input_label == "custom":
        raw_terms = data.get("custom_terms")
        if not isinstance(raw_terms, list) or not raw_terms:
            raise ConfigurationError(
                "input 'custom' needs a non-empty 'custom_terms' list")
        custom_terms = []
        for term in raw_terms:
            if not isinstance(term, dict) or set(term) != {"state", "amplitude"}:
                raise ConfigurationError(
                    "each custom term must be a mapping with keys 'state' and "
                    f"'amplitude', got {term!r}")
            custom_terms.append((_parse_bits(term["state"], chain_length),
                                 _parse_amplitude(term["amplitude"])))
        custom_terms = tuple(custom_terms)
    else:
        if "custom_terms" in data:
            raise ConfigurationError("'custom_terms' requires input: custom")
        input_kind = InputKind.parse(str(input_label))

    epsilon = data.get("epsilon", 0.0)
    if isinstance(epsilon, (list, tuple)):
        if not all(isinstance(e, numbers.Real) and not isinstance(e, bool)
                   for e in epsilon):
            raise ConfigurationError("config key 'epsilon' list must hold numbers")
        epsilon = tuple(float(e) for e in epsilon)
    elif isinstance(epsilon, numbers.Real) and not isinstance(epsilon, bool):
        epsilon = float(epsilon)
    else:
        raise ConfigurationError(
            f"config key 'epsilon' must be a number or list, got {epsilon!r}")

    perturbation = PerturbationSpec(
        eta=_expect_number(data, "eta", 0.0),
        epsilon=epsilon,
        gamma=_expect_number(data, "gamma", 0.0),
        delta=_expect_number(data, "delta", 0.0),
        chi=_expect_number(data, "chi", 0.0),
        seed=_expect_int(data, "seed", PerturbationSpec().seed),
        long_range_cross_sector=_expect_bool(data, "chi_cross_sector", True),
        long_range_diagonal=_expect_bool(data, "chi_diagonal", False),
    )

    eof_sites = data.get("eof_sites")
    if eof_sites is not None:
        if (not isinstance(eof_sites, (list, tuple)) or len(eof_sites) != 2
                or not all(isinstance(s, numbers.Integral) for s in eof_sites)):
            raise ConfigurationError(
                f"config key 'eof_sites' must be a pair of site numbers, got {eof_sites!r}")
        eof_sites = (int(eof_sites[0]), int(eof_sites[1]))

    grid_times = data.get("grid_times_over_ts")
    if grid_times is not None:
        if not isinstance(grid_times, (list, tuple)) or not grid_times \
                or not all(isinstance(v, numbers.Real) and not isinstance(v, bool)
                           for v in grid_times):
            raise ConfigurationError(
                "config key 'grid_times_over_ts' must be a non-empty list of numbers")
        grid_times = tuple(float(v) for v in grid_times)

    sweep_n = data.get("sweep_n")
    if sweep_n is not None:
        if not isinstance(sweep_n, (list, tuple)) or not sweep_n \
                or not all(isinstance(v, numbers.Integral) and not isinstance(v, bool)
                           for v in sweep_n):
            raise ConfigurationError(
                "config key 'sweep_n' must be a non-empty list of chain lengths")
        sweep_n = tuple(int(v) for v in sweep_n)

    probe_label = data.get("probe", ProbeTime.FIRST_REVIVAL.value)
    try:
        probe = ProbeTime(probe_label)
    except ValueError:
        options = ", ".join(p.value for p in ProbeTime)
        raise ConfigurationError(
            f"config key 'probe' must be one of {options}, got {probe_label!r}") from None

    fidelity_target = data.get("fidelity_target", "initial")
    if not isinstance(fidelity_target, str):
        raise ConfigurationError("config key 'fidelity_target' must be a string")

    profile = data.get("profile", "pst")
    if not isinstance(profile, str):
        raise ConfigurationError("config key 'profile' must be a string")

    return ExperimentConfig(
        chain_length=chain_length,
        input_kind=input_kind,
        custom_terms=custom_terms,
        max_excitations=_expect_int(data, "max_excitations", 2),
        j0=_expect_number(data, "j0", 1.0),
        profile=profile,
        perturbation=perturbation,
        grid_points=_expect_int(data, "grid_points", 801),
        t_max_over_ts=_expect_number(data, "t_max_over_ts", 4.0),
        grid_times_over_ts=grid_times,
        fidelity_target=fidelity_target,
        eof_sites=eof_sites,
        realisations=_expect_int(data, "realisations", 100),
        sweep_lengths=sweep_n,
        probe=probe,
    )


def _config_to_dict(config: ExperimentConfig) -> dict:
    """Flat mapping of the resolved configuration, for the manifest."""
    pert = config.perturbation
    out = {
        "chain_length": config.chain_length,
        "input": config.input_kind.value if config.input_kind else "custom",
        "max_excitations": config.max_excitations,
        "j0": config.j0,
        "profile": config.profile,
        "eta": pert.eta,
        "epsilon": (list(pert.epsilon) if isinstance(pert.epsilon, tuple)
                    else pert.epsilon),
        "gamma": pert.gamma,
        "delta": pert.delta,
        "chi": pert.chi,
        "seed": pert.seed,
        "grid_points": config.grid_points,
        "t_max_over_ts": config.t_max_over_ts,
        "fidelity_target": config.fidelity_target,
        "eof_sites": list(config.resolve_eof_sites()),
        "realisations": config.realisations,
        "probe": config.probe.value,
    }
    if config.custom_terms is not None:
        out["custom_terms"] = [
            {"state": "".join(str(b) for b in bits),
             "amplitude": [amp.real, amp.imag]}
            for bits, amp in config.custom_terms]
    if config.grid_times_over_ts is not None:
        out["grid_times_over_ts"] = list(config.grid_times_over_ts)
    if config.sweep_lengths is not None:
        out["sweep_n"] = list(config.sweep_lengths)
    if not pert.long_range_cross_sector:
        out["chi_cross_sector"] = False
    if pert.long_range_diagonal:
        out["chi_diagonal"] = True
    return out


def _format_field(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12e}"


def _write_csv(path: Path, header: list[str], columns: list) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([_format_field(v) for v in row])


def _write_timeseries_csv(path: Path, series) -> None:
    _write_csv(path, ["t_over_ts", "fidelity", "eof"],
               [series.grid.fractions, series.fidelity, series.eof])


def _write_ensemble_csv(path: Path, summary: EnsembleSummary) -> None:
    _write_csv(path,
               ["t_over_ts", "mean_fidelity", "std_fidelity",
                "mean_eof", "std_eof"],
               [summary.grid.fractions, summary.mean_fidelity,
                summary.std_fidelity, summary.mean_eof, summary.std_eof])


def _write_sweep_csv(path: Path, result: SweepResult) -> None:
    _write_csv(path, ["N", "mean", "std"],
               [result.lengths(), result.means(), result.stds()])


def _write_fit_sidecar(path: Path, fit) -> None:
    payload = {
        "model": fit.model.value,
        "amplitude": float(fit.amplitude),
        "scale": float(fit.scale),
        "rss": float(fit.rss),
    }
    with open(path, "w") as fh:
        yaml.safe_dump(payload, fh, sort_keys=False)


def _write_manifest(out_dir: Path, subcommand: str, outputs: list[dict],
                    seed: int, realisations: int, started: float,
                    preset: str | None = None) -> None:
    manifest = {
        "tool": "pstchain",
        "version": __version__,
        "subcommand": subcommand,
        "kernel_backend": kernels.backend_name(),
        "master_seed": seed,
        "realisations": realisations,
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "duration_seconds": round(time.monotonic() - started, 3),
        "files": [entry["file"] for entry in outputs],
        "outputs": outputs,
    }
    if preset is not None:
        manifest["preset"] = preset
    with open(out_dir / "manifest.yaml", "w") as fh:
        yaml.safe_dump(manifest, fh, sort_keys=False)


def _load_config(args) -> ExperimentConfig:
    path = Path(args.config)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    config = parse_config(text)
    return _apply_overrides(config, args)


def _apply_overrides(config: ExperimentConfig, args) -> ExperimentConfig:
    if getattr(args, "seed", None) is not None:
        config = replace(config,
                         perturbation=replace(config.perturbation, seed=args.seed))
    if getattr(args, "realisations", None) is not None:
        config = replace(config, realisations=args.realisations)
    return config


def _out_dir(args, default_leaf: str) -> Path:
    out = Path(args.out) if args.out else Path("pstchain-out") / default_leaf
    out.mkdir(parents=True, exist_ok=True)
    return out


def _parse_lengths(text: str) -> tuple[int, ...]:
    """Parse '6..15' or '6,8,10' into a tuple of chain lengths."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lengths = tuple(range(int(lo), int(hi) + 1))
        else:
            lengths = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ConfigurationError(
            f"cannot parse chain lengths {text!r}; use '6..15' or '6,8,10'") from None
    if not lengths:
        raise ConfigurationError("chain length list is empty")
    return lengths


def _cmd_run(args) -> int:
    started = time.monotonic()
    config = _load_config(args)
    out = _out_dir(args, "run")
    series = run_realization(config, 0)
    csv_path = out / "timeseries.csv"
    _write_timeseries_csv(csv_path, series)
    outputs = [{"file": csv_path.name, "config": _config_to_dict(config)}]
    _write_manifest(out, "run", outputs, config.perturbation.seed, 1, started)
    print(f"wrote {csv_path} and {out / 'manifest.yaml'}")
    return 0


def _cmd_ensemble(args) -> int:
    started = time.monotonic()
    config = _load_config(args)
    out = _out_dir(args, "ensemble")
    summary = run_ensemble(config)
    csv_path = out / "ensemble.csv"
    _write_ensemble_csv(csv_path, summary)
    outputs = [{"file": csv_path.name, "config": _config_to_dict(config)}]
    _write_manifest(out, "ensemble", outputs, summary.master_seed,
                    summary.realisations, started)
    print(f"wrote {csv_path} and {out / 'manifest.yaml'}")
    return 0


def _fit_and_write(out: Path, stem: str, result: SweepResult,
                   fit_model: str) -> list[str]:
    files = []
    if fit_model == "none":
        return files
    model = (TrendModel.EXPONENTIAL_IN_N if fit_model == "exponential"
             else TrendModel.GAUSSIAN_IN_PARAMETER)
    try:
        fit = fit_trend(result.lengths(), result.means(), model)
    except FitError as exc:
        print(f"warning: trend fit skipped: {exc}", file=sys.stderr)
        return files
    fit_path = out / f"{stem}_fit.yaml"
    _write_fit_sidecar(fit_path, fit)
    files.append(fit_path.name)
    return files


def _cmd_sweep(args) -> int:
    started = time.monotonic()
    config = _load_config(args)
    if args.lengths is not None:
        config = replace(config, sweep_lengths=_parse_lengths(args.lengths))
    if args.probe is not None:
        config = replace(config, probe=ProbeTime(args.probe))
    if config.sweep_lengths is None:
        raise ConfigurationError(
            "sweep needs chain lengths; set config key 'sweep_n' or pass --lengths")
    out = _out_dir(args, "sweep")
    result = sweep_chain_length(config, config.sweep_lengths, config.probe)
    csv_path = out / "sweep.csv"
    _write_sweep_csv(csv_path, result)
    files = [csv_path.name]
    files += _fit_and_write(out, "sweep", result, args.fit)
    outputs = [{"file": name, "config": _config_to_dict(config),
                "observable": result.observable} for name in files]
    _write_manifest(out, "sweep", outputs, result.master_seed,
                    result.realisations, started)
    print(f"wrote {', '.join(str(out / f) for f in files)} and {out / 'manifest.yaml'}")
    return 0


_PRESET_LENGTHS = tuple(range(6, 16))

_PRESETS = {
    "fig1a": ("timeseries", InputKind.TYPE_I,
              "two-excitation input: fidelity time series at N=10 for "
              "long-range strengths 0.03 and 0.1"),
    "fig1b": ("timeseries", InputKind.TYPE_II,
              "shared-excitation input: (1,2) EoF time series at N=10 "
              "for long-range strengths 0.03 and 0.1"),
    "fig1c": ("timeseries", InputKind.TYPE_III,
              "plus-state ends input: (1,N) EoF time series at N=10 for "
              "long-range strengths 0.03 and 0.1"),
    "fig2a": ("sweep", InputKind.TYPE_I,
              "two-excitation input: revival fidelity against chain length "
              "at long-range strength 0.03"),
    "fig2b": ("sweep", InputKind.TYPE_II,
              "shared-excitation input: far-pair EoF against chain length "
              "at long-range strength 0.03"),
    "fig2c": ("sweep", InputKind.TYPE_III,
              "plus-state ends input: (1,N) EoF against chain length "
              "at long-range strength 0.03"),
}

_PRESET_CHAIN_LENGTH = 10
_PRESET_CHI_PAIR = (0.03, 0.1)
_PRESET_CHI_SWEEP = 0.03


def _preset_base_config(kind: InputKind, chi: float) -> ExperimentConfig:
    eof_sites = {InputKind.TYPE_I: None, InputKind.TYPE_II: (1, 2),
                 InputKind.TYPE_III: (1, _PRESET_CHAIN_LENGTH)}[kind]
    return ExperimentConfig(
        chain_length=_PRESET_CHAIN_LENGTH,
        input_kind=kind,
        perturbation=PerturbationSpec(chi=chi),
        eof_sites=eof_sites,
    )


def _cmd_preset(args) -> int:
    started = time.monotonic()
    kind_label, input_kind, _ = _PRESETS[args.name]
    out = _out_dir(args, args.name)
    outputs = []
    if kind_label == "timeseries":
        seed = None
        for chi in _PRESET_CHI_PAIR:
            config = _apply_overrides(_preset_base_config(input_kind, chi), args)
            series = run_realization(config, 0)
            csv_path = out / f"{args.name}_chi{chi:g}.csv"
            _write_timeseries_csv(csv_path, series)
            outputs.append({"file": csv_path.name,
                            "config": _config_to_dict(config)})
            seed = config.perturbation.seed
        _write_manifest(out, "preset", outputs, seed, 1, started, preset=args.name)
    else:
        config = _apply_overrides(
            _preset_base_config(input_kind, _PRESET_CHI_SWEEP), args)
        result = sweep_chain_length(config, _PRESET_LENGTHS,
                                    ProbeTime.FIRST_REVIVAL)
        csv_path = out / f"{args.name}_sweep.csv"
        _write_sweep_csv(csv_path, result)
        files = [csv_path.name]
        files += _fit_and_write(out, args.name, result, "exponential")
        outputs = [{"file": name, "config": _config_to_dict(config),
                    "observable": result.observable} for name in files]
        _write_manifest(out, "preset", outputs, result.master_seed,
                        result.realisations, started, preset=args.name)
    print(f"wrote {len(outputs)} file(s) and manifest to {out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pstchain",
        description="Spin-chain state transfer under engineered couplings "
                    "and perturbations")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_config=True, with_realisations=True):
        if with_config:
            p.add_argument("--config", required=True,
                           help="YAML config file")
        p.add_argument("--out", help="output directory (created if missing)")
        p.add_argument("--seed", type=int, help="override the master seed")
        if with_realisations:
            p.add_argument("--realisations", type=int,
                           help="override the realisation count")

    p_run = sub.add_parser("run", help="time series for a single realisation")
    add_common(p_run, with_realisations=False)
    p_run.set_defaults(handler=_cmd_run)

    p_ens = sub.add_parser("ensemble",
                           help="pointwise mean and spread over realisations")
    add_common(p_ens)
    p_ens.set_defaults(handler=_cmd_ensemble)

    p_sweep = sub.add_parser("sweep",
                             help="probe statistics against chain length")
    add_common(p_sweep)
    p_sweep.add_argument("--lengths",
                         help="chain lengths, e.g. '6..15' or '6,8,10'")
    p_sweep.add_argument("--probe", choices=[p.value for p in ProbeTime],
                         help="probe instant (default from config)")
    p_sweep.add_argument("--fit", default="exponential",
                         choices=["exponential", "gaussian", "none"],
                         help="trend model for the fit sidecar")
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_preset = sub.add_parser("preset", help="run a canned configuration")
    p_preset.add_argument("name", choices=sorted(_PRESETS),
                          help="preset name")
    add_common(p_preset, with_config=False)
    p_preset.set_defaults(handler=_cmd_preset)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except PstChainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
