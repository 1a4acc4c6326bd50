import json

import numpy as np
import pytest

from hyperchemo.cli import main
from hyperchemo.config import parse_config
from hyperchemo.errors import ConfigError
from hyperchemo.runner import COLUMNS_1D, COLUMNS_2D, convergence_study, run_simulation

SMALL_1D = """\
run.scheme = {scheme}
grid.L = 1
grid.Nx = 24
model.s = 10
model.D_n = 1
model.D_N1 = 0.001
model.alpha1 = 0.33
ic.n0 = 5
ic.x0 = 0.25
ic.sigma = 0.15
time.t_end = 0.002
time.output_times = 0.001, 0.002
"""

SMALL_2D = """\
run.scheme = lf2d
grid.Lx = 0.4
grid.Ly = 0.4
grid.Nx = 20
grid.Ny = 20
model.s = 100
model.D_n = 1
model.D_N1 = 0.001
model.alpha1 = 0.33
ic.n0 = 0.25
ic.x0 = 0.09
ic.y0 = 0.09
ic.sigma = 0.03
time.t_end = 0.0002
time.output_times = 0.0002
"""


@pytest.mark.parametrize("scheme", ["wb1d", "ks1d", "kinetic1d"])
def test_run_simulation_1d_outputs(tmp_path, scheme):
    cfg = parse_config(SMALL_1D.format(scheme=scheme))
    out = tmp_path / scheme
    manifest = run_simulation(cfg, out)
    assert (out / "manifest.json").exists()
    files = sorted(f.name for f in out.glob("snapshot_*.csv"))
    assert files == ["snapshot_000.csv", "snapshot_001.csv"]
    assert [s["time"] for s in manifest["snapshots"]] == [0.001, 0.002]
    assert manifest["steps"] > 0
    assert manifest["dt"] > 0
    # header row and column count
    lines = (out / "snapshot_001.csv").read_text().splitlines()
    header = [ln for ln in lines if not ln.startswith("#")][0]
    assert header == ",".join(COLUMNS_1D)
    data = np.genfromtxt(out / "snapshot_001.csv", delimiter=",", comments="#",
                         skip_header=sum(1 for ln in lines if ln.startswith("#")) + 1)
    assert data.shape == (25, 5)
    assert np.isfinite(data).all()
    # mass series recorded
    assert all(np.isfinite(s["mass_n"]) for s in manifest["snapshots"])
    # manifest round-trips through json
    loaded = json.loads((out / "manifest.json").read_text())
    assert loaded["scheme"] == scheme


def test_run_simulation_2d_outputs(tmp_path):
    cfg = parse_config(SMALL_2D)
    manifest = run_simulation(cfg, tmp_path / "lf")
    lines = (tmp_path / "lf" / "snapshot_000.csv").read_text().splitlines()
    header = [ln for ln in lines if not ln.startswith("#")][0]
    assert header == ",".join(COLUMNS_2D)
    assert manifest["grid"]["Ny"] == 20
    data = np.genfromtxt(tmp_path / "lf" / "snapshot_000.csv", delimiter=",",
                         comments="#", skip_header=len(lines) - 21 * 21 - 1 + 1)
    assert data.shape == (441, 8)


def test_run_is_deterministic(tmp_path):
    cfg = parse_config(SMALL_1D.format(scheme="wb1d"))
    run_simulation(cfg, tmp_path / "a")
    run_simulation(cfg, tmp_path / "b")
    for name in ("snapshot_000.csv", "snapshot_001.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_output_times_hit_exactly_with_dt_truncation(tmp_path):
    text = SMALL_1D.format(scheme="wb1d").replace(
        "time.output_times = 0.001, 0.002", "time.output_times = 0.0017")
    cfg = parse_config(text)
    manifest = run_simulation(cfg, tmp_path / "mid")
    assert manifest["snapshots"][0]["time"] == 0.0017


def test_single_step_horizon(tmp_path):
    cfg = parse_config(SMALL_1D.format(scheme="wb1d"))
    from hyperchemo.runner import make_grid, make_params, nominal_dt
    dt, _ = nominal_dt(cfg, make_params(cfg), make_grid(cfg))
    from dataclasses import replace
    cfg = replace(cfg, t_end=dt, output_times=[dt])
    manifest = run_simulation(cfg, tmp_path / "one")
    assert manifest["steps"] == 1


def test_convergence_study_small(tmp_path):
    base = parse_config(SMALL_1D.format(scheme="wb1d"))
    rows = convergence_study(base, [0, 2], tmp_path / "study")
    assert [r["k"] for r in rows] == [0, 2]
    assert rows[1]["E_L1"] < rows[0]["E_L1"]
    table = (tmp_path / "study" / "study.csv").read_text().splitlines()
    header = [ln for ln in table if not ln.startswith("#")][0]
    assert header == "k,eps,E_L1,E_Linf"
    assert (tmp_path / "study" / "ks" / "manifest.json").exists()
    assert (tmp_path / "study" / "k_0" / "snapshot_000.csv").exists()


def test_convergence_study_validation(tmp_path):
    base = parse_config(SMALL_1D.format(scheme="wb1d"))
    with pytest.raises(ConfigError, match="nonempty"):
        convergence_study(base, [], tmp_path)
    from dataclasses import replace
    with pytest.raises(ConfigError, match="must be wb1d"):
        convergence_study(replace(base, scheme="ks1d"), [0], tmp_path)


# ----------------------------------------------------------------------- CLI

def test_cli_run_and_study(tmp_path, capsys):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(SMALL_1D.format(scheme="wb1d"))
    assert main(["run", str(cfg_path), "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "manifest.json").exists()
    assert "snapshot" in capsys.readouterr().out

    assert main(["study", str(cfg_path), "--k", "0,1",
                 "--out", str(tmp_path / "study")]) == 0
    assert (tmp_path / "study" / "study.csv").exists()


def test_cli_presets(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    assert "bumps1d_wb" in out and "bumps2d_lf" in out
    assert main(["presets", "bumps1d_wb"]) == 0
    text = capsys.readouterr().out
    parse_config(text)   # printed preset must itself be a valid config


def test_cli_errors_exit_nonzero(tmp_path, capsys):
    assert main(["run", str(tmp_path / "missing.cfg")]) == 1
    assert "error:" in capsys.readouterr().err
    bad = tmp_path / "bad.cfg"
    bad.write_text("run.scheme = wb1d\nnonsense.key = 1\n")
    assert main(["run", str(bad)]) == 1
    assert "unknown key" in capsys.readouterr().err
    assert main(["presets", "nope"]) == 1
