import csv
import json
import math

import numpy as np
import pytest

from thermal_decoherence import ConfigError
from thermal_decoherence.bose import log_sinh_ratio
from thermal_decoherence.cli import EXIT_BUDGET, EXIT_CONFIG, EXIT_OK, SWEEP_HEADER, fmt, main
from thermal_decoherence.config import expand_grid, load_config
from thermal_decoherence.errors import QuadratureBudgetError


def _write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_fmt():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(float("nan")) == "nan"
    assert fmt(np.float64(2.0)) == "2"


def test_grid_expansion():
    assert np.allclose(expand_grid({"kind": "log", "start": 1, "stop": 100, "num": 3}, "g"), [1, 10, 100])
    assert np.allclose(expand_grid({"kind": "linear", "start": 3, "stop": 1, "num": 3}, "g"), [3, 2, 1])
    assert expand_grid(2.5, "g").tolist() == [2.5]
    for bad in ([], [1, 1], [1, 3, 2], [1, float("inf")], {"kind": "cubic", "start": 1, "stop": 2, "num": 2},
                {"kind": "log", "start": 0, "stop": 2, "num": 2}):
        with pytest.raises(ConfigError):
            expand_grid(bad, "g")


def test_config_layers(tmp_path):
    path = _write(tmp_path, "tol = 1e-8\n[sweep]\nmethod = 'reduced'\n")
    cfg = load_config(path, {"tol": 1e-7})
    assert cfg["tol"] == 1e-7
    assert cfg["sweep"]["method"] == "reduced"
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "[sweep]\nspeed = 1\n", "bad.toml"))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "tol = -1\n", "neg.toml"))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "tol = \n", "broken.toml"))


def test_sweep_zero_separation(tmp_path):
    path = _write(tmp_path, "[sweep]\ntau_hat = [3.0]\ny_hat = [0.0]\nv = [0.01]\n")
    assert main(["sweep", "--config", path, "--out", str(tmp_path / "o")]) == EXIT_OK
    rows = _rows(tmp_path / "o" / "sweep.csv")
    assert rows[0] == SWEEP_HEADER
    assert len(rows) == 2 and float(rows[1][4]) == 0.0


def test_sweep_regime_column_is_wide_separation_law(tmp_path):
    path = _write(tmp_path, "[sweep]\ntau_hat = {kind = 'log', start = 0.1, stop = 10, num = 3}\n"
                            "y_hat = [100.0]\nv = [0.01]\nalpha = 0.0073\n")
    assert main(["sweep", "--config", path, "--out", str(tmp_path), "--method", "regime"]) == EXIT_OK
    rows = _rows(tmp_path / "sweep.csv")[1:]
    assert [float(r[0]) for r in rows] == pytest.approx([0.1, 1.0, 10.0])
    for r in rows:
        tau = float(r[0])
        assert float(r[6]) == pytest.approx(4 / (3 * math.pi) * 0.0073 * 1e-4 * float(log_sinh_ratio(tau)), rel=1e-14)
        assert r[4] == "nan" and r[5] == "nan"


def test_sweep_row_order_and_rerun(tmp_path):
    path = _write(tmp_path, "[sweep]\ntau_hat = [0.5, 2.0]\ny_hat = [1.0, 3.0]\nv = [0.01, 0.02]\n"
                            "method = 'reduced'\n")
    main(["sweep", "--config", path, "--out", str(tmp_path / "a")])
    main(["sweep", "--config", path, "--out", str(tmp_path / "b")])
    a = (tmp_path / "a" / "sweep.csv").read_bytes()
    assert a == (tmp_path / "b" / "sweep.csv").read_bytes()
    assert (tmp_path / "a" / "sweep.json").read_bytes() == (tmp_path / "b" / "sweep.json").read_bytes()
    keys = [tuple(map(float, r[:3])) for r in _rows(tmp_path / "a" / "sweep.csv")[1:]]
    assert keys == sorted(keys) and len(keys) == 8
    side = json.loads((tmp_path / "a" / "sweep.json").read_text())
    assert len(side["constants_hash"]) == 64
    assert side["config"]["sweep"]["method"] == "reduced"


def test_sweep_physical_axes(tmp_path):
    path = _write(tmp_path, "[sweep]\ntemperature = [10.0, 300.0]\nmethod = 'reduced'\n")
    assert main(["sweep", "--config", path, "--out", str(tmp_path)]) == EXIT_OK
    rows = _rows(tmp_path / "sweep.csv")[1:]
    assert len(rows) == 2
    assert float(rows[0][5]) < float(rows[1][5])


def test_visibility(tmp_path):
    path = _write(tmp_path, "[visibility]\ntau_hat = [1.0]\ndv = [0.0, 0.01]\nalpha = 0.0072973525693\n"
                            "[visibility.screen]\ngrid = {kind = 'linear', start = -3, stop = 3, num = 7}\n"
                            "tau_hat = 10.0\ndv = 0.01\nwavenumber = 500.0\n")
    assert main(["visibility", "--config", path, "--out", str(tmp_path)]) == EXIT_OK
    rows = _rows(tmp_path / "visibility.csv")
    assert rows[0] == ["tau_hat", "dv", "S12_closed", "S12_first_principles", "visibility"]
    assert float(rows[1][4]) == 1.0
    assert float(rows[2][2]) == pytest.approx(2.016e-7, rel=1e-3)
    assert float(rows[2][3]) == pytest.approx(float(rows[2][2]), rel=1e-3)
    screen = _rows(tmp_path / "screen.csv")
    assert screen[0] == ["x", "density", "rho1", "rho2", "cross"] and len(screen) == 8


def test_visibility_rejects_fast_dv(tmp_path):
    path = _write(tmp_path, "[visibility]\ndv = [0.2]\n")
    assert main(["visibility", "--config", path, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_wigner(tmp_path, capsys):
    path = _write(tmp_path, "[wigner]\nb = 0.0\n")
    assert main(["wigner", "--config", path, "--out", str(tmp_path)]) == EXIT_OK
    rows = _rows(tmp_path / "wigner.csv")
    assert rows[0] == ["k", "W0", "Wt"]
    assert all(r[1] == r[2] for r in rows[1:])
    residual = float(capsys.readouterr().out.strip().split("=")[1])
    assert residual < 1e-8


def test_wigner_nyquist_exit(tmp_path, capsys):
    path = _write(tmp_path, "[wigner]\nk = [0.0, 1000.0]\n")
    assert main(["wigner", "--config", path, "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "Nyquist" in capsys.readouterr().err


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["sweep", "--out", str(blocker / "sub")]) == EXIT_CONFIG


def test_constants(capsys):
    assert main(["constants"]) == EXIT_OK
    out = capsys.readouterr().out
    for token in ("2*pi/9", "4/(3*pi)", "2*pi^3/225", "2*pi/45", "1/2", "pi/18", "1/(3*pi)", "hbar"):
        assert token in out


def test_validate_quick(tmp_path):
    assert main(["validate", "--quick", "--out", str(tmp_path)]) == EXIT_OK
    report = json.loads((tmp_path / "validate_report.json").read_text())
    assert report["passed"] and report["quick"]
    assert all(c["passed"] for c in report["checks"])
    names = {a["name"] for a in report["adjudication"]}
    assert {"short_time_wide_separation", "stationary_short_separation", "interference_log"} <= names


def test_validate_seed_changes_only_error_bars(tmp_path):
    main(["validate", "--quick", "--seed", "1", "--out", str(tmp_path / "a")])
    main(["validate", "--quick", "--seed", "2", "--out", str(tmp_path / "b")])
    a = json.loads((tmp_path / "a" / "validate_report.json").read_text())["checks"]
    b = json.loads((tmp_path / "b" / "validate_report.json").read_text())["checks"]
    assert [c["passed"] for c in a] == [c["passed"] for c in b]
    mc = [i for i, c in enumerate(a) if c["name"].startswith("mc_kernel")]
    assert mc and all(a[i]["error_bar"] != b[i]["error_bar"] for i in mc)
    others = [i for i in range(len(a)) if i not in mc]
    assert all(a[i] == b[i] for i in others)


def test_validate_budget_exit_writes_partial_report(tmp_path, monkeypatch):
    import thermal_decoherence.cli as cli

    def broken(*args, **kwargs):
        raise QuadratureBudgetError("budget")

    monkeypatch.setattr(cli, "s_exact", broken)
    assert main(["validate", "--quick", "--out", str(tmp_path)]) == EXIT_BUDGET
    report = json.loads((tmp_path / "validate_report.json").read_text())
    assert not report["passed"] and report["checks"] and report["error"] == "budget"


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "thermal_decoherence", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "0.1.0"
