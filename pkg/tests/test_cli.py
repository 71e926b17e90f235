"""Config parsing, CSV/manifest output and CLI behaviour."""

import re

import numpy as np
import pytest
import yaml

from pstchain import ConfigurationError, InputKind, ProbeTime
from pstchain.cli import main, parse_config, _parse_lengths

FLOAT_FIELD = re.compile(r"^-?\d\.\d{12}e[+-]\d{2,3}$")


def test_parse_config_minimal_defaults():
    cfg = parse_config("N: 6\ninput: TypeI\n")
    assert cfg.chain_length == 6
    assert cfg.input_kind is InputKind.TYPE_I
    assert cfg.max_excitations == 2
    assert cfg.j0 == 1.0
    assert cfg.profile == "pst"
    pert = cfg.perturbation
    assert (pert.eta, pert.epsilon, pert.gamma, pert.delta, pert.chi) == \
        (0.0, 0.0, 0.0, 0.0, 0.0)
    assert cfg.grid_points == 801
    assert cfg.t_max_over_ts == 4.0
    assert cfg.fidelity_target == "initial"
    assert cfg.realisations == 100
    assert cfg.probe is ProbeTime.FIRST_REVIVAL


def test_parse_config_full_document():
    text = """
chain_length: 10
input: TypeIII
max_excitations: 2
j0: 2.0
eta: 0.1
epsilon: [0.1, 0, 0, 0, 0, 0, 0, 0, 0, 0.2]
gamma: 0.5
delta: 0.05
chi: 0.03
seed: 424242
grid_points: 201
t_max_over_ts: 2.0
fidelity_target: mirror
eof_sites: [1, 10]
realizations: 50
sweep_n: [6, 8, 10]
probe: transfer
"""
    cfg = parse_config(text)
    assert cfg.input_kind is InputKind.TYPE_III
    assert cfg.j0 == 2.0
    assert cfg.perturbation.epsilon == (0.1, 0, 0, 0, 0, 0, 0, 0, 0, 0.2)
    assert cfg.perturbation.seed == 424242
    assert cfg.eof_sites == (1, 10)
    assert cfg.realisations == 50
    assert cfg.sweep_lengths == (6, 8, 10)
    assert cfg.probe is ProbeTime.FIRST_TRANSFER
    assert cfg.fidelity_target == "mirror"


def test_parse_config_custom_input():
    text = """
N: 4
input: custom
custom_terms:
  - {state: "1000", amplitude: 1.0}
  - {state: "0001", amplitude: [0.0, 1.0]}
"""
    cfg = parse_config(text)
    assert cfg.input_kind is None
    assert cfg.custom_terms == (((1, 0, 0, 0), 1.0 + 0.0j),
                                ((0, 0, 0, 1), 1.0j))


@pytest.mark.parametrize("text,fragment", [
    ("input: TypeI\n", "chain_length"),
    ("N: 6\ninputt: TypeI\n", "inputt"),
    ("N: 6\ninput: TypeIV\n", "TypeIV"),
    ("N: 6\neta: fast\n", "eta"),
    ("N: 6\nseed: 1.5\n", "seed"),
    ("N: 6\nepsilon: {a: 1}\n", "epsilon"),
    ("N: 6\neof_sites: [1]\n", "eof_sites"),
    ("N: 6\nprobe: sometimes\n", "probe"),
    ("N: 6\nsweep_n: []\n", "sweep_n"),
    ("N: 6\ninput: custom\n", "custom_terms"),
    ("N: 6\ncustom_terms: [{state: '100000', amplitude: 1}]\n", "custom"),
    ("N: 4\ninput: custom\ncustom_terms: [{state: '10', amplitude: 1}]\n", "state"),
    ("- just\n- a list\n", "mapping"),
    ("N: [6\n", "YAML"),
])
def test_parse_config_rejects_bad_documents(text, fragment):
    with pytest.raises(ConfigurationError, match=fragment):
        parse_config(text)


def test_parse_config_rejects_input_mismatch():
    # plus-state ends need the two-excitation sector
    with pytest.raises(ConfigurationError):
        parse_config("N: 6\ninput: TypeIII\nmax_excitations: 1\n")


def test_parse_lengths():
    assert _parse_lengths("6..9") == (6, 7, 8, 9)
    assert _parse_lengths("6,8,10") == (6, 8, 10)
    assert _parse_lengths("7") == (7,)
    with pytest.raises(ConfigurationError):
        _parse_lengths("six to ten")


def _write_config(tmp_path, text):
    path = tmp_path / "config.yaml"
    path.write_text(text)
    return str(path)


_SMALL = "N: 5\ninput: TypeII\nchi: 0.05\ngrid_points: 21\nrealisations: 4\nseed: 11\n"


def test_cli_run_outputs(tmp_path, capsys):
    cfg = _write_config(tmp_path, _SMALL)
    out = tmp_path / "out"
    assert main(["run", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "timeseries.csv").read_text().splitlines()
    assert lines[0] == "t_over_ts,fidelity,eof"
    assert len(lines) == 22
    for field in lines[1].split(","):
        assert FLOAT_FIELD.match(field), field

    manifest = yaml.safe_load((out / "manifest.yaml").read_text())
    assert manifest["files"] == ["timeseries.csv"]
    assert manifest["subcommand"] == "run"
    assert manifest["master_seed"] == 11
    assert manifest["realisations"] == 1
    assert manifest["outputs"][0]["config"]["chain_length"] == 5
    assert "duration_seconds" in manifest


def test_cli_run_is_byte_deterministic(tmp_path):
    cfg = _write_config(tmp_path, _SMALL)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", cfg, "--out", str(out_a)]) == 0
    assert main(["run", "--config", cfg, "--out", str(out_b)]) == 0
    assert (out_a / "timeseries.csv").read_bytes() == \
        (out_b / "timeseries.csv").read_bytes()


def test_cli_seed_override_changes_data(tmp_path):
    cfg = _write_config(tmp_path, _SMALL)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", cfg, "--out", str(out_a),
                 "--seed", "999"]) == 0
    assert main(["run", "--config", cfg, "--out", str(out_b)]) == 0
    manifest = yaml.safe_load((out_a / "manifest.yaml").read_text())
    assert manifest["master_seed"] == 999
    assert (out_a / "timeseries.csv").read_bytes() != \
        (out_b / "timeseries.csv").read_bytes()


def test_cli_ensemble_outputs(tmp_path):
    cfg = _write_config(tmp_path, _SMALL)
    out = tmp_path / "out"
    assert main(["ensemble", "--config", cfg, "--out", str(out),
                 "--realisations", "3"]) == 0
    lines = (out / "ensemble.csv").read_text().splitlines()
    assert lines[0] == "t_over_ts,mean_fidelity,std_fidelity,mean_eof,std_eof"
    assert len(lines) == 22
    manifest = yaml.safe_load((out / "manifest.yaml").read_text())
    assert manifest["realisations"] == 3
    assert manifest["outputs"][0]["config"]["realisations"] == 3


def test_cli_sweep_outputs(tmp_path):
    cfg = _write_config(tmp_path, _SMALL)
    out = tmp_path / "out"
    assert main(["sweep", "--config", cfg, "--out", str(out),
                 "--lengths", "4..8", "--realisations", "3"]) == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "N,mean,std"
    assert len(lines) == 6
    assert lines[1].split(",")[0] == "4"
    fit = yaml.safe_load((out / "sweep_fit.yaml").read_text())
    assert fit["model"] == "exponential"
    assert set(fit) == {"model", "amplitude", "scale", "rss"}
    manifest = yaml.safe_load((out / "manifest.yaml").read_text())
    assert manifest["files"] == ["sweep.csv", "sweep_fit.yaml"]
    assert "eof" in manifest["outputs"][0]["observable"]


def test_cli_sweep_fit_none(tmp_path):
    cfg = _write_config(tmp_path, _SMALL)
    out = tmp_path / "out"
    assert main(["sweep", "--config", cfg, "--out", str(out),
                 "--lengths", "4..6", "--realisations", "2",
                 "--fit", "none"]) == 0
    assert not (out / "sweep_fit.yaml").exists()


def test_cli_sweep_fit_failure_warns_but_succeeds(tmp_path, capsys):
    # two points cannot support a trend fit; the sweep itself still runs
    cfg = _write_config(tmp_path, _SMALL)
    out = tmp_path / "out"
    assert main(["sweep", "--config", cfg, "--out", str(out),
                 "--lengths", "4,5", "--realisations", "2"]) == 0
    assert not (out / "sweep_fit.yaml").exists()
    assert "fit skipped" in capsys.readouterr().err
    manifest = yaml.safe_load((out / "manifest.yaml").read_text())
    assert manifest["files"] == ["sweep.csv"]


def test_cli_sweep_needs_lengths(tmp_path, capsys):
    cfg = _write_config(tmp_path, _SMALL)
    assert main(["sweep", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "sweep_n" in capsys.readouterr().err


def test_cli_missing_config_file(tmp_path, capsys):
    code = main(["run", "--config", str(tmp_path / "nope.yaml"),
                 "--out", str(tmp_path / "out")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_cli_bad_config_key(tmp_path, capsys):
    cfg = _write_config(tmp_path, "N: 5\ninput: TypeI\nspeed: 3\n")
    code = main(["run", "--config", cfg, "--out", str(tmp_path / "out")])
    assert code == 2
    assert "speed" in capsys.readouterr().err


def test_cli_preset_timeseries(tmp_path):
    out = tmp_path / "fig1a"
    assert main(["preset", "fig1a", "--out", str(out)]) == 0
    files = sorted(p.name for p in out.iterdir())
    assert files == ["fig1a_chi0.03.csv", "fig1a_chi0.1.csv", "manifest.yaml"]
    manifest = yaml.safe_load((out / "manifest.yaml").read_text())
    assert manifest["preset"] == "fig1a"
    configs = [entry["config"] for entry in manifest["outputs"]]
    assert [c["chi"] for c in configs] == [0.03, 0.1]
    assert all(c["chain_length"] == 10 for c in configs)
    header = (out / "fig1a_chi0.1.csv").read_text().splitlines()[0]
    assert header == "t_over_ts,fidelity,eof"
