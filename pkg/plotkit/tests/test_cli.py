import yaml

from plotkit.cli import main


def _run_csv(path):
    path.write_text(
        "t_over_ts,fidelity,eof\n0.0,1.0,0.9\n0.5,0.8,0.7\n1.0,0.7,0.6\n")
    return path


def _sweep_csv(path):
    path.write_text("N,mean,std\n6,0.9,0.01\n8,0.8,0.02\n10,0.7,0.02\n")
    return path


def test_timeseries_command_writes_both_formats(tmp_path, capsys):
    csv_path = _run_csv(tmp_path / "a.csv")
    out = tmp_path / "panel.png"
    code = main(["timeseries", "--csv", str(csv_path), "--out", str(out)])
    assert code == 0
    assert out.exists()
    assert out.with_suffix(".svg").exists()
    assert "wrote" in capsys.readouterr().out


def test_schema_error_exits_2_and_names_columns(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("t_over_ts,other\n0.0,1.0\n")
    code = main(["timeseries", "--csv", str(bad),
                 "--out", str(tmp_path / "p"), "--metric", "eof"])
    assert code == 2
    err = capsys.readouterr().err
    assert "error:" in err and "missing columns" in err


def test_empty_csv_exits_2(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    code = main(["sweep", "--csv", str(empty), "--out", str(tmp_path / "p")])
    assert code == 2
    assert "empty" in capsys.readouterr().err


def test_sweep_discovers_sidecar_next_to_csv(tmp_path, capsys):
    csv_path = _sweep_csv(tmp_path / "fig_sweep.csv")
    (tmp_path / "fig_fit.yaml").write_text(yaml.safe_dump(
        {"model": "exponential", "amplitude": 1.1, "scale": 0.04}))
    code = main(["sweep", "--csv", str(csv_path),
                 "--out", str(tmp_path / "panel")])
    assert code == 0
    assert (tmp_path / "panel.svg").exists()


def test_no_fit_flag_skips_discovery(tmp_path):
    csv_path = _sweep_csv(tmp_path / "fig_sweep.csv")
    (tmp_path / "fig_fit.yaml").write_text("not: [valid")
    # the broken sidecar would fail the run unless --no-fit skips it
    code = main(["sweep", "--csv", str(csv_path),
                 "--out", str(tmp_path / "panel"), "--no-fit"])
    assert code == 0


def test_explicit_fit_needs_a_single_csv(tmp_path, capsys):
    first = _sweep_csv(tmp_path / "a.csv")
    second = _sweep_csv(tmp_path / "b.csv")
    fit = tmp_path / "fit.yaml"
    fit.write_text(yaml.safe_dump(
        {"model": "exponential", "amplitude": 1.0, "scale": 0.1}))
    code = main(["sweep", "--csv", str(first), str(second),
                 "--out", str(tmp_path / "p"), "--fit", str(fit)])
    assert code == 2
    assert "single CSV" in capsys.readouterr().err


def test_missing_input_file_exits_2(tmp_path, capsys):
    code = main(["timeseries", "--csv", str(tmp_path / "nope.csv"),
                 "--out", str(tmp_path / "p")])
    assert code == 2
    assert "cannot read" in capsys.readouterr().err
