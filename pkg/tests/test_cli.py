import csv
import json

import pytest

from periscope.cli import main
from periscope.config import ConfigError, ScenarioConfig, parse_config
from periscope.demos import NAMES

REVERSED = {
    "scenario": "reversed",
    "dimension": 3,
    "C": 3.0,
    "mirror": {"family": "affine", "params": {"a": [0.5, 0.0], "b": 1.0}},
    "domain": {"lower": [-1.0, -1.0], "upper": [1.0, 1.0]},
    "grid": [5, 5],
    "checks": ["synthesize", "trace"],
    "output": {"name": "rev"},
}

SPHERE_FLAT = {
    "scenario": "spherical",
    "dimension": 3,
    "C": 2.0,
    "mirror": {"family": "constant", "params": {"c": 0.0}},
    "patch": {"center": [0.0, 0.0, 1.0], "radius": 0.4},
    "grid": 5,
    "checks": ["trace"],
    "output": {"name": "flat"},
}


def write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(cfg if isinstance(cfg, str) else json.dumps(cfg, indent=2))
    return str(path)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_flat_sphere_run(tmp_path):
    out = tmp_path / "out"
    assert main(["run", write(tmp_path, SPHERE_FLAT), "--out", str(out)]) == 0
    rows = read_rows(out / "flat.csv")
    assert len(rows) == 25
    for r in rows:
        assert r["flag"] == "antipodal"
        for c in ("colinearity", "return_to_source", "direction_match", "path_defect"):
            assert abs(float(r[c])) < 1e-12


def test_reversed_worked_row(tmp_path):
    out = tmp_path / "out"
    assert main(["run", write(tmp_path, REVERSED), "--out", str(out)]) == 0
    rows = read_rows(out / "rev.csv")
    assert list(rows[0])[:4] == ["i", "j", "x0", "x1"]
    assert list(rows[0])[-1] == "flag"
    centre = [r for r in rows if float(r["x0"]) == 0.0 and float(r["x1"]) == 0.0]
    assert len(centre) == 1
    r = centre[0]
    assert float(r["g"]) == -5.0
    assert abs(float(r["U_norm"]) - 8.0) < 1e-12
    assert abs(float(r["path_defect"])) < 1e-12
    summary = json.loads((out / "rev.json").read_text())
    assert summary["pass"] and summary["tolerances"]["trace"] == 1e-9
    assert set(summary["checks"]) == {"synthesize", "trace"}
    assert summary["checks"]["trace"]["worst_point"] is not None


def test_rows_in_lexicographic_order(tmp_path):
    out = tmp_path / "out"
    main(["run", write(tmp_path, REVERSED), "--out", str(out)])
    idx = [(int(r["i"]), int(r["j"])) for r in read_rows(out / "rev.csv")]
    assert idx == sorted(idx) and len(idx) == 25


def test_echo_round_trip(tmp_path):
    out = tmp_path / "out"
    main(["run", write(tmp_path, REVERSED), "--out", str(out)])
    echo = json.loads((out / "rev.json").read_text())["config"]
    again = parse_config(json.dumps(echo))
    assert again == ScenarioConfig.model_validate(REVERSED)
    assert again.echo() == echo


def test_csv_deterministic_and_jobs_parity(tmp_path):
    cfg = write(tmp_path, REVERSED)
    a, b, c = (tmp_path / n for n in "abc")
    main(["run", cfg, "--out", str(a)])
    main(["run", cfg, "--out", str(b)])
    main(["run", cfg, "--out", str(c), "--jobs", "2"])
    data = (a / "rev.csv").read_bytes()
    assert data == (b / "rev.csv").read_bytes() == (c / "rev.csv").read_bytes()
    assert b"\r" not in data


def test_malformed_json(tmp_path, capsys):
    bad = '{\n  "scenario": "reversed",\n  "C": 3.0,,\n}'
    assert main(["run", write(tmp_path, bad)]) == 1
    err = capsys.readouterr().err
    assert "line 3" in err and "column" in err


def test_unknown_key(tmp_path, capsys):
    cfg = dict(REVERSED, colour="red")
    assert main(["run", write(tmp_path, cfg)]) == 1
    assert "colour" in capsys.readouterr().err


def test_non_finite_rejected():
    text = json.dumps(REVERSED).replace("3.0", "NaN")
    with pytest.raises(ConfigError):
        parse_config(text)


@pytest.mark.parametrize("grid", [[0, 5], [5, 10001], [5]])
def test_bad_grid(grid):
    with pytest.raises(ConfigError):
        parse_config(json.dumps(dict(REVERSED, grid=grid)))


def test_frobenius_needs_dimension_four():
    with pytest.raises(ConfigError):
        parse_config(json.dumps(dict(REVERSED, checks=["frobenius"])))


def test_missing_file(tmp_path):
    assert main(["run", str(tmp_path / "nope.json")]) == 1


def test_slope_bound_exit(tmp_path, capsys):
    cfg = dict(REVERSED, mirror={"family": "affine", "params": {"a": [1.2, 0.0], "b": 1.0}})
    assert main(["run", write(tmp_path, cfg), "--out", str(tmp_path)]) == 2
    assert "slope-bound" in capsys.readouterr().err


def test_failed_check_exit(tmp_path):
    cfg = dict(REVERSED, tolerances={"trace": 1e-30, "synthesize": 1e-30, "frobenius": 1e-5})
    assert main(["run", write(tmp_path, cfg), "--out", str(tmp_path / "o")]) == 2


def test_unknown_demo(capsys):
    assert main(["demo", "nope"]) == 1
    err = capsys.readouterr().err
    assert all(n in err for n in NAMES)


def test_demo_contact(tmp_path, capsys):
    assert main(["demo", "frobenius-contact", "--out", str(tmp_path)]) == 0
    assert "-1.000000" in capsys.readouterr().out


def test_demo_reversed_affine_prints_identity(tmp_path, capsys):
    assert main(["demo", "reversed-affine", "--out", str(tmp_path)]) == 0
    assert "2C = 6" in capsys.readouterr().out


def test_env_jobs(tmp_path, monkeypatch):
    monkeypatch.setenv("PERISCOPE_JOBS", "x")
    assert main(["run", write(tmp_path, REVERSED), "--out", str(tmp_path)]) == 1
