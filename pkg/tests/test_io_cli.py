import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floq_otoc import EPS, ConfigError, ModelConfig
from floq_otoc.cli import main
from floq_otoc.io import (
    apply_overrides,
    build_request,
    load_config,
    make_manifest,
    manifest_to_values,
    parse_config_text,
    read_series_csv,
    write_series_csv,
)
from floq_otoc.otoc import OtocSeries, compute_otoc_series, default_request

CONFIG = """
# small nonintegrable run
n_sites = 6
h_x = 1.0
tau = 6eps/2
axis = lm
l = 0
m = 2
n_max = 30
"""


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=1.0, allow_nan=False), min_size=1, max_size=40))
def test_csv_round_trip_exact(tmp_path_factory, values):
    path = tmp_path_factory.mktemp("csv") / "series.csv"
    req = default_request(ModelConfig.integrable(4, 0.1), "tm", 1, len(values) - 1)
    s = OtocSeries(req, np.arange(len(values)), np.array(values, dtype=complex))
    write_series_csv(s, path)
    back = read_series_csv(path, req)
    assert np.array_equal(back.kicks, s.kicks)
    assert np.array_equal(back.f_values, s.f_values)
    assert np.array_equal(back.c_values, s.c_values)


def test_csv_header(tmp_path):
    s = compute_otoc_series(default_request(ModelConfig.integrable(4, 0.1), "tm", 1, 2))
    write_series_csv(s, tmp_path / "s.csv")
    assert (tmp_path / "s.csv").read_text().splitlines()[0] == "n,re_f,im_f,c"


def test_parse_config():
    values = parse_config_text(CONFIG)
    assert values["tau"] == pytest.approx(3 * EPS)
    req = build_request(values)
    assert req.config.variant.value == "nonintegrable" and req.axis.value == "lm" and req.m == 2


@pytest.mark.parametrize("text", ["n_sites 6", "n_sites = six", "colour = red"])
def test_bad_config(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_overrides():
    v = apply_overrides({"n_sites": 6}, ["tau=eps/2", "n_max=5"])
    assert v["n_max"] == 5
    with pytest.raises(ConfigError):
        apply_overrides(v, ["n_max"])


def test_missing_n_sites():
    with pytest.raises(ConfigError):
        build_request({"tau": 0.1})


def test_manifest_round_trip():
    req = build_request({"n_sites": 6, "h_x": 1.0, "axis": "tm", "m": 3, "initial": "haar", "seed": 12})
    values = manifest_to_values(json.loads(json.dumps(make_manifest(req, {}, 0.0))))
    assert build_request(values) == req


def run_cli(*args):
    return main([str(a) for a in args])


def test_run_and_rerun_byte_identical(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(CONFIG)
    assert run_cli("run", "--config", cfg, "--out", tmp_path / "a") == 0
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert manifest["outputs"] == {"series": "series.csv"}
    assert manifest["config"]["n_sites"] == 6
    assert run_cli("run", "--config", tmp_path / "a" / "manifest.json", "--out", tmp_path / "b") == 0
    assert (tmp_path / "a" / "series.csv").read_bytes() == (tmp_path / "b" / "series.csv").read_bytes()


def test_haar_rerun_byte_identical(tmp_path):
    args = ["--set", "n_sites=6", "--set", "initial=haar", "--set", "seed=5", "--set", "n_max=20"]
    assert run_cli("run", *args, "--out", tmp_path / "a") == 0
    assert run_cli("run", "--config", tmp_path / "a" / "manifest.json", "--out", tmp_path / "b") == 0
    assert (tmp_path / "a" / "series.csv").read_bytes() == (tmp_path / "b" / "series.csv").read_bytes()


def test_stride_flag(tmp_path):
    assert run_cli("run", "--set", "n_sites=4", "--set", "n_max=20", "--stride", 5, "--out", tmp_path) == 0
    lines = (tmp_path / "series.csv").read_text().splitlines()
    assert [line.split(",")[0] for line in lines[1:]] == ["0", "5", "10", "15", "20"]


def test_budget_exit_code(tmp_path):
    code = run_cli("run", "--set", "n_sites=12", "--set", "n_max=4000", "--budget", 0.2, "--out", tmp_path)
    assert code == 3
    assert json.loads((tmp_path / "manifest.json").read_text())["truncated"] is True


@pytest.mark.parametrize(
    "args",
    [
        [],
        ["frobnicate"],
        ["run", "--set", "colour=red"],
        ["run", "--set", "n_sites=40"],
        ["validate", "--level", "medium"],
        ["sweep", "--over", "tau", "--values", ""],
    ],
)
def test_usage_errors(args, tmp_path):
    assert run_cli(*args, *(["--out", tmp_path] if args[:1] == ["sweep"] else [])) == 2


def test_env_cap_applies_to_cli(tmp_path, monkeypatch):
    monkeypatch.setenv("FLOQ_OTOC_MAX_SITES", "5")
    assert run_cli("run", "--set", "n_sites=6", "--out", tmp_path) == 2


def test_sweep_delta_l(tmp_path):
    base = ["--set", "n_sites=8", "--set", "n_max=120", "--set", "tau=eps/2", "--out", tmp_path]
    assert run_cli("sweep", *base, "--over", "delta_l", "--values", "2,3,4,5,6", "--jobs", 2) == 0
    rows = (tmp_path / "profile.csv").read_text().splitlines()
    assert rows[0] == "delta_l,b,b_stderr,t_char,t_s,mu" and len(rows) == 6
    fit = json.loads((tmp_path / "profile_fit.json").read_text())
    assert fit["model"] == "triangular" and fit["b_max"] > 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert len(manifest["runs"]) == 5
    for run in manifest["runs"]:
        sub = json.loads((tmp_path / run / "manifest.json").read_text())
        assert sub["outputs"]["series"] == "series.csv"


def test_sweep_tau(tmp_path):
    base = ["--set", "n_sites=6", "--set", "n_max=40", "--out", tmp_path]
    assert run_cli("sweep", *base, "--over", "tau", "--values", "eps/2,3eps/2") == 0
    assert len((tmp_path / "profile.csv").read_text().splitlines()) == 3


def test_analyze(tmp_path, capsys):
    run_cli("run", "--set", "n_sites=8", "--set", "n_max=150", "--set", "m=2", "--out", tmp_path)
    capsys.readouterr()
    assert run_cli("analyze", tmp_path / "series.csv", "--out", tmp_path / "report.json") == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["t_char"] == 2


def test_analyze_threshold(tmp_path, capsys):
    run_cli("run", "--set", "n_sites=8", "--set", "n_max=60", "--set", "m=3", "--out", tmp_path)
    capsys.readouterr()
    run_cli("analyze", tmp_path / "series.csv", "--threshold", "0.5")
    assert json.loads(capsys.readouterr().out)["t_char"] > 3


def test_analyze_needs_manifest(tmp_path):
    (tmp_path / "series.csv").write_text("n,re_f,im_f,c\n0,1,0,0\n")
    assert run_cli("analyze", tmp_path / "series.csv") == 2


def test_load_config_file(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text(CONFIG)
    assert load_config(p)["n_max"] == 30
