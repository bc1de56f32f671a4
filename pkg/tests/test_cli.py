import json

import pytest

from disopt.cli import EXIT_OK, EXIT_STRICT, EXIT_USAGE, main


def _write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


SMALL_RUN = {
    "n": 3,
    "p": 1,
    "topology": {"type": "complete"},
    "roles": ["honest", "honest", "adversarial"],
    "objective": {"name": "quadratic", "box": {"lo": -1.0, "hi": 1.0}},
    "quantizer": {"bits": 3, "interval_length": 1.0, "midpoint": 0.0},
    "attack": {"kind": "constant", "value": [0.2], "seed": 0},
    "alpha": 0.7,
    "iterations": 20,
    "seeds": [0, 1],
}


def test_run_writes_artifacts(tmp_path, capsys):
    cfg = _write(tmp_path, "small.json", SMALL_RUN)
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out)]) == EXIT_OK
    assert (out / "small_seed0.csv").exists()
    assert (out / "small_seed1.csv").exists()
    assert (out / "small_bounds.json").exists()
    report = json.loads((out / "small_bounds.json").read_text())
    assert report["bits"] == 3
    assert report["seeds"] == [0, 1]
    assert "wrote" in capsys.readouterr().out


def test_run_per_agent_columns(tmp_path):
    cfg = _write(tmp_path, "small.json", SMALL_RUN)
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out), "--per-agent"]) == EXIT_OK
    header = (out / "small_seed0.csv").read_text().splitlines()[0]
    assert "err_agent_0" in header and "err_agent_2" in header


def test_missing_config_is_usage_error(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == EXIT_USAGE
    assert "cannot read" in capsys.readouterr().err


def test_invalid_config_reports_field_paths(tmp_path, capsys):
    doc = dict(SMALL_RUN, alpha=-1)
    cfg = _write(tmp_path, "bad.json", doc)
    assert main(["run", str(cfg), "--out", str(tmp_path)]) == EXIT_USAGE
    assert "alpha" in capsys.readouterr().err


def test_outdir_env_fallback(tmp_path, monkeypatch):
    cfg = _write(tmp_path, "small.json", SMALL_RUN)
    out = tmp_path / "envout"
    monkeypatch.setenv("DISOPT_OUT", str(out))
    assert main(["run", str(cfg)]) == EXIT_OK
    assert (out / "small_seed0.csv").exists()


def test_preset_with_seed_subset(tmp_path):
    out = tmp_path / "out"
    assert main(["preset", "fig2b", "--seeds", "1", "--out", str(out)]) == EXIT_OK
    assert (out / "fig2b_seed0.csv").exists()
    assert not (out / "fig2b_seed1.csv").exists()


def test_preset_zero_seeds_is_usage_error(tmp_path, capsys):
    code = main(["preset", "fig2a", "--seeds", "0", "--out", str(tmp_path)])
    assert code == EXIT_USAGE
    assert "--seeds" in capsys.readouterr().err


def test_unknown_subcommand_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == EXIT_USAGE


def test_sweep_writes_summary(tmp_path):
    grid = {
        "base": dict(SMALL_RUN, seeds=[0]),
        "grid": {"bits": [1, 3], "alpha": [0.7]},
    }
    path = _write(tmp_path, "grid.json", grid)
    out = tmp_path / "out"
    assert main(["sweep", str(path), "--out", str(out)]) == EXIT_OK
    lines = (out / "sweep_summary.csv").read_text().splitlines()
    assert len(lines) == 3  # header plus two grid points
    assert lines[0].startswith("alpha,bits")


def test_sweep_invalid_grid_point(tmp_path, capsys):
    grid = {"base": dict(SMALL_RUN, seeds=[0]), "grid": {"alpha": [0.7, -2]}}
    path = _write(tmp_path, "grid.json", grid)
    assert main(["sweep", str(path), "--out", str(tmp_path)]) == EXIT_USAGE
    assert "alpha" in capsys.readouterr().err


def test_strict_mode_exit_code(tmp_path):
    # congested preset with a single seed trips the projection-error bound
    out = tmp_path / "out"
    code = main(["preset", "fig2c", "--strict", "--out", str(out)])
    assert code == EXIT_STRICT
    # the artifacts are still written before the failure is reported
    assert (out / "fig2c_seed0.csv").exists()
