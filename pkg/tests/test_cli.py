import csv
import json
from pathlib import Path

import numpy as np
import pytest

from specdecay import __version__
from specdecay.cli import EXIT_CONFIG, EXIT_NUMERICAL, main, parse_law
from specdecay.config import ConfigError, ExperimentConfig
from specdecay.experiments import run

from make_golden import CASES, GOLDEN


def read_csv(path):
    lines = Path(path).read_text().splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    rows = list(csv.DictReader(ln for ln in lines if not ln.startswith("#")))
    return comments, rows


def body(path):
    # everything except the config echo, which carries the output path
    return [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("# config")]


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_files(name, tmp_path):
    assert main(CASES[name] + ["--out", str(tmp_path)]) == 0
    for golden in sorted(GOLDEN.glob(f"{name}_*.csv")):
        produced = tmp_path / golden.name.removeprefix(f"{name}_")
        assert body(produced) == body(golden), golden.name


def test_outputs_embed_config_and_version(tmp_path):
    cfg = ExperimentConfig("extremes", L=5, alpha=0.25, delta=1.0, trials=3, output_dir=str(tmp_path))
    run(cfg)
    for name in ("trials.csv", "curves.csv"):
        comments, _ = read_csv(tmp_path / name)
        assert comments[0] == f"# specdecay {__version__}"
        assert json.loads(comments[1].removeprefix("# config ")) == cfg.to_dict()
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["config"] == cfg.to_dict() and summary["version"] == __version__
    assert json.loads((tmp_path / "config.json").read_text()) == cfg.to_dict()


def test_numbers_round_trip(tmp_path):
    assert main(["extremes", "--L", "10", "--alpha", "0.5", "--delta", "1.5", "--trials", "7",
                 "--out", str(tmp_path)]) == 0
    raw = (tmp_path / "trials.csv").read_text().splitlines()[3:]
    for line in raw:
        for field in line.split(",")[1:]:
            assert repr(float(field)) == field


def test_extremes_rows_and_bracket(tmp_path):
    assert main(["extremes", "--L", "40", "--alpha", "0.25", "--delta", "1", "--trials", "25",
                 "--out", str(tmp_path)]) == 0
    _, rows = read_csv(tmp_path / "trials.csv")
    assert len(rows) == 25
    for r in rows:
        assert abs(float(r["E_max"]) - float(r["diag_max"])) <= 2
        assert abs(float(r["E_min"]) - float(r["diag_min"])) <= 2
    _, curves = read_csv(tmp_path / "curves.csv")
    assert list(curves[0]) == ["x", "emp_cdf_max", "emp_cdf_diag_max", "exact_ML", "limit_frechet",
                               "x_min", "emp_cdf_min", "emp_cdf_diag_min", "exact_min",
                               "limit_frechet_min"]
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["bracket_holds"] and summary["regime"] == "sub_critical"


@pytest.mark.parametrize("experiment,extra", [
    ("extremes", ["--L", "20", "--alpha", "0.25", "--delta", "1", "--trials", "10"]),
    ("ids", ["--L", "10", "20", "--alpha", "1", "--trials", "2"]),
    ("wasserstein", ["--L", "10", "--alpha", "0.5", "--trials", "3"]),
    ("spectrum", ["--L", "2", "--d", "2", "--law", "gaussian:0,1"]),
])
def test_rerun_is_byte_identical(experiment, extra, tmp_path):
    out = tmp_path / "run"
    assert main([experiment, *extra, "--out", str(out)]) == 0
    first = {f: (out / f).read_bytes() for f in ("trials.csv", "curves.csv", "summary.json")}
    assert main([experiment, *extra, "--out", str(out)]) == 0
    for f, data in first.items():
        assert (out / f).read_bytes() == data, f


def test_config_file_and_overrides(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"experiment": "ids", "L": [5, 10], "alpha": 1.0, "trials": 1,
                                    "law": {"kind": "uniform", "a": 0, "b": 1}}))
    out = tmp_path / "out"
    assert main(["ids", "--config", str(cfg_path), "--trials", "2", "--out", str(out)]) == 0
    cfg = json.loads((out / "config.json").read_text())
    assert cfg["trials"] == 2 and cfg["L"] == [5, 10]
    _, rows = read_csv(out / "trials.csv")
    assert [(r["L"], r["trial"]) for r in rows] == [("5", "0"), ("5", "1"), ("10", "0"), ("10", "1")]


def test_config_round_trip():
    data = {"experiment": "ids", "d": 1, "L": [25, 50], "alpha": 1.0, "delta": None,
            "law": {"kind": "uniform", "a": 0.0, "b": 1.0}, "trials": 1, "master_seed": 7,
            "norm_kind": "sup", "output_dir": "x", "resolution": 2048,
            "override_infinite_variance": False}
    cfg = ExperimentConfig.from_dict(data)
    assert json.loads(cfg.canonical_json()) == data
    assert cfg.canonical_json() == json.dumps(data, sort_keys=True, separators=(",", ":"))


@pytest.mark.parametrize("argv,message", [
    (["ids", "--L", "5", "--law", "pareto:1"], "infinite second moment"),
    (["extremes", "--L", "5", "--alpha", "2", "--delta", "1"], "not admissible"),
    (["extremes", "--L", "5", "--alpha", "0.5"], "positive delta"),
    (["extremes", "--L", "5", "--delta", "1", "--law", "uniform:0,1"], "pareto_symmetric"),
    (["ids", "--L", "5", "--trials", "0"], "trials"),
    (["spectrum", "--L", "40", "--d", "2"], "dense eigensolve"),
    (["ids", "--alpha", "1"], "needs L"),
    (["free-ids", "--d", "2", "--resolution", "100"], "resolution"),
])
def test_validation_exit_code(argv, message, tmp_path, capsys):
    assert main(argv + ["--out", str(tmp_path / "o")]) == EXIT_CONFIG
    assert message in capsys.readouterr().err
    assert not (tmp_path / "o" / "trials.csv").exists()


def test_missing_output_dir(capsys):
    assert main(["free-ids", "--d", "1", "--resolution", "8"]) == EXIT_CONFIG
    assert "output_dir" in capsys.readouterr().err


def test_override_allows_heavy_tails(tmp_path):
    assert main(["ids", "--L", "5", "--law", "pareto:1", "--override-infinite-variance",
                 "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["all_bounds_hold"]


def test_numerical_failure_exit_code(monkeypatch, tmp_path, capsys):
    from specdecay import eigensolve

    monkeypatch.setattr(eigensolve, "MAX_QL_SWEEPS", 0)
    assert main(["ids", "--L", "5", "--alpha", "1", "--out", str(tmp_path)]) == EXIT_NUMERICAL
    assert "numerical failure" in capsys.readouterr().err


def test_unknown_config_key():
    with pytest.raises(ConfigError, match="unknown config keys"):
        ExperimentConfig.from_dict({"experiment": "ids", "colour": "red"})


def test_parse_law():
    assert parse_law("uniform:0,1") == {"kind": "uniform", "a": 0.0, "b": 1.0}
    assert parse_law("pareto:2.5") == {"kind": "pareto_symmetric", "delta": 2.5}
    assert parse_law('{"kind": "gaussian", "mean": 0, "sd": 2}')["sd"] == 2
    with pytest.raises(ConfigError):
        parse_law("gaussian:1")


def test_free_ids_outputs(tmp_path):
    assert main(["free-ids", "--d", "1", "--resolution", "400", "--out", str(tmp_path)]) == 0
    _, rows = read_csv(tmp_path / "curves.csv")
    E = np.array([float(r["E"]) for r in rows])
    n0 = np.array([float(r["N0"]) for r in rows])
    fin = np.array([float(r["N0_finite_L"]) for r in rows])
    mid = np.argmin(np.abs(E))
    assert E[mid] == 0 and abs(n0[mid] - 0.5) <= 1e-3 and abs(fin[mid] - 0.5) <= 1e-3
    assert n0[-1] == 1.0 and fin[-1] == 1.0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["cross_check_L"] == 5000 and summary["max_gap"] <= 1e-3


def test_wasserstein_outputs(tmp_path):
    assert main(["wasserstein", "--L", "10", "30", "--alpha", "1", "--trials", "3",
                 "--out", str(tmp_path)]) == 0
    _, curves = read_csv(tmp_path / "curves.csv")
    assert [c["L"] for c in curves] == ["10", "30"]
    assert all(float(c["max_ratio"]) <= 1 for c in curves)
