import json

import numpy as np
import pytest

from spinclone.cli import _floats, _fmt, _ints, ConfigError, load_config, main


def run(tmp_path, *argv):
    return main(list(argv))


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    return header, rows


def test_fmt_and_grid_parsing():
    assert _fmt(0.8535533905932737) == "0.853553391"
    assert _fmt(3) == "3"
    assert _floats("0,0.5,1") == [0.0, 0.5, 1.0]
    assert _floats("0:1:3") == [0.0, 0.5, 1.0]
    assert _ints("2,3") == [2, 3]
    with pytest.raises(ConfigError):
        _floats("a,b")
    with pytest.raises(ConfigError):
        _ints("2.5")


def test_load_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("M = 3   # clones\n\nmodel=xy\n")
    assert load_config(str(cfg)) == {"M": "3", "model": "xy"}
    bad = tmp_path / "bad.cfg"
    bad.write_text("no equals sign\n")
    with pytest.raises(ConfigError):
        load_config(str(bad))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.cfg"))


def test_pcc_subcommand(tmp_path):
    out = tmp_path / "pcc.csv"
    assert run(tmp_path, "pcc", "--M", "2", "--model", "xy",
               "--t-horizon", "12", "--output", str(out)) == 0
    header, rows = read_csv(out)
    assert header[:3] == ["topology", "M", "model"]
    assert float(rows[0]["F"]) == pytest.approx(
        0.5 * (1.0 + 1.0 / np.sqrt(2.0)), abs=1e-9)
    sidecar = json.loads((tmp_path / "pcc.csv.json").read_text())
    assert sidecar["schema"] == header
    assert sidecar["config"]["M"] == 2
    assert "timestamp" in sidecar


def test_universal_subcommand(tmp_path):
    out = tmp_path / "uni.csv"
    assert run(tmp_path, "universal", "--t-max", "3", "--t-step", "0.5",
               "--output", str(out)) == 0
    header, rows = read_csv(out)
    best = max(float(r["F"]) for r in rows)
    assert best == pytest.approx(13.0 / 18.0, abs=1e-9)


def test_qudit_subcommand(tmp_path):
    out = tmp_path / "qudit.csv"
    assert run(tmp_path, "qudit", "--d", "3", "--mode", "effective",
               "--output", str(out)) == 0
    _, rows = read_csv(out)
    assert float(rows[0]["F"]) == pytest.approx(
        (4.0 + 2.0 * np.sqrt(2.0)) / 9.0, abs=1e-9)
    assert float(rows[0]["F"]) == pytest.approx(
        float(rows[0]["F_closed_form"]), abs=1e-9)


def test_disorder_subcommand_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["disorder", "--M", "2", "--epsilon", "0.1", "--mu", "0",
            "--n", "40", "--seed", "5"]
    assert run(tmp_path, *args, "--output", str(a)) == 0
    assert run(tmp_path, *args, "--output", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_injection_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("d=3\nmode=effective\n")
    out = tmp_path / "q.csv"
    # CLI flag overrides the config value for d
    assert run(tmp_path, "qudit", "--config", str(cfg), "--d", "2",
               "--output", str(out)) == 0
    _, rows = read_csv(out)
    assert rows[0]["d"] == "2"


def test_unknown_config_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("nonsense=1\n")
    out = tmp_path / "q.csv"
    assert run(tmp_path, "qudit", "--config", str(cfg), "--d", "3",
               "--output", str(out)) == 2
    assert "nonsense" in capsys.readouterr().err


def test_bad_value_exits_2(tmp_path):
    out = tmp_path / "q.csv"
    assert run(tmp_path, "qudit", "--d", "1", "--output", str(out)) == 2


def test_josephson_subcommand(tmp_path):
    out = tmp_path / "jj.csv"
    assert run(tmp_path, "josephson", "--ratios", "0,0.1",
               "--output", str(out)) == 0
    _, rows = read_csv(out)
    assert float(rows[0]["F_max"]) == pytest.approx(
        0.5 * (1.0 + 1.0 / np.sqrt(2.0)), abs=1e-9)
    assert float(rows[1]["F_max"]) <= float(rows[0]["F_max"])


def test_theta_sweep_render(tmp_path):
    out = tmp_path / "theta.csv"
    assert run(tmp_path, "theta-sweep", "--M", "2", "--points", "12",
               "--output", str(out), "--render") == 0
    assert (tmp_path / "theta.svg").exists()
    assert (tmp_path / "theta.png").exists()


def test_render_subcommand_roundtrip(tmp_path):
    out = tmp_path / "theta.csv"
    assert run(tmp_path, "theta-sweep", "--M", "2", "--points", "8",
               "--output", str(out)) == 0
    assert run(tmp_path, "render", "--figure", "fig2", "--csv", str(out),
               "--out", str(tmp_path / "again")) == 0
    assert (tmp_path / "again.svg").exists()


def test_workers_env_parallel_matches_serial(tmp_path, monkeypatch):
    a, b = tmp_path / "serial.csv", tmp_path / "par.csv"
    args = ["redfield-compare", "--M", "2", "--alpha", "0.001,0.003",
            "--tol", "1e-6"]
    monkeypatch.delenv("SPINCLONE_WORKERS", raising=False)
    assert run(tmp_path, *args, "--output", str(a)) == 0
    monkeypatch.setenv("SPINCLONE_WORKERS", "2")
    assert run(tmp_path, *args, "--output", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()
