import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from szego_lab.cli import load_config, parse_orders, run_command
from szego_lab.errors import ConfigError


def test_limit_example(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code = run_command(["limit", "--space", "bergman", "--symbol", "cos(theta)", "--psi", "x^2",
                        "--orders", "16:1024:geometric", "--out", str(out)])
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert [int(r["N"]) for r in rows] == [16, 32, 64, 128, 256, 512, 1024]
    assert {r["target"] for r in rows} == {"0.5"}
    assert capsys.readouterr().out == ""


def test_matrix_identity(tmp_path):
    out = tmp_path / "m.json"
    assert run_command(["matrix", "--space", "bergman", "--symbol", "1", "--N", "4",
                        "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["order"] == 4
    e = np.array(d["entries"]).reshape(5, 5, 2)
    np.testing.assert_array_equal(e[..., 0], np.eye(5))
    np.testing.assert_array_equal(e[..., 1], 0)


def test_unknown_identifier_exit_1(capsys):
    assert run_command(["limit", "--symbol", "cos(thetaa)"]) == 1
    err = capsys.readouterr()
    assert "unknown identifier 'thetaa'" in err.err and err.out == ""


def test_unknown_command_and_flag(capsys):
    assert run_command(["frobnicate"]) == 1
    assert run_command(["limit", "--nope", "1"]) == 1
    assert run_command([]) == 1


def test_flag_overrides_file(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text('space = "fock"\n')
    assert load_config(cfg).space == "fock"
    assert load_config(cfg, {"space": "bergman"}).space == "bergman"


def test_empty_file_gives_defaults(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# nothing here\n\n")
    c = load_config(cfg)
    assert (c.space, c.symbol, c.psi, c.N) == ("bergman", "cos(theta)", "x^2", 64)
    assert c.orders == (16, 32, 64, 128, 256, 512, 1024)
    assert (c.radial_nodes, c.radial_panels, c.angular_samples, c.tail_tol) == (200, 8, 512, 1e-12)


def test_infinite_radius_general_symbol_needs_boundary(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text('space = "custom"\nradius = "inf"\ndensity = "2*exp(-r^2)"\nsymbol = "x"\n')
    with pytest.raises(ConfigError, match="radial limit"):
        load_config(cfg)
    c = load_config(cfg, {"boundary": "cos(theta)"})
    assert c.radius == math.inf


@pytest.mark.parametrize("text, match", [
    ('space = "a"\nspace = "b"\n', "duplicate key 'space'"),
    ("colour = 3\n", "unknown key 'colour'"),
    ('N = "3"\n', "key 'N'"),
    ("N = 3.5\n", "key 'N'"),
    ("space = bergman\n", "key 'space'"),
    ("just text\n", "c.cfg:1"),
    ('symbol = "cos(thetaa)"\n', "unknown identifier 'thetaa'"),
    ("orders = 64:16:geometric\n", "key 'orders'"),
])
def test_config_errors(tmp_path, text, match):
    cfg = tmp_path / "c.cfg"
    cfg.write_text(text)
    with pytest.raises(ConfigError, match=match):
        load_config(cfg)


def test_error_carries_line_number(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text('# header\nspace = "fock"\nN = x\n')
    with pytest.raises(ConfigError, match=r"c.cfg:3: key 'N'"):
        load_config(cfg)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "nope.cfg")


def test_constant_expressions_in_window():
    c = load_config(None, {"alpha": "pi/2", "beta": "pi"})
    assert (c.alpha, c.beta) == (math.pi / 2, math.pi)


def test_parse_orders():
    assert parse_orders("16:128:geometric") == (16, 32, 64, 128)
    assert parse_orders("10:40:linear") == (10, 20, 30, 40)
    assert parse_orders("0:3:linear") == (0, 1, 2, 3)
    assert parse_orders("5, 7,9") == (5, 7, 9)
    for bad in ("a:b:geometric", "1:4:cubic", "", "0:8:geometric"):
        with pytest.raises(ConfigError):
            parse_orders(bad)


def test_moments_spectrum_density_to_stdout(capsys):
    assert run_command(["moments", "--space", "fock", "--N", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "n,log_c" and float(out[2].split(",")[1]) == 0.0  # log Gamma(1)
    assert run_command(["spectrum", "--symbol", "cos(theta)", "--N", "3"]) == 0
    assert capsys.readouterr().out.startswith("j,lambda\n0,-0.786914636686")
    assert run_command(["density", "--alpha", "0.5", "--beta", "1", "--orders", "32"]) == 0
    assert capsys.readouterr().out.startswith("N,count,fraction,target,error\n32,")


def test_density_warning_goes_to_stderr(capsys):
    assert run_command(["density", "--alpha", "0", "--beta", "2", "--orders", "16"]) == 0
    out = capsys.readouterr()
    assert "warning: window (0, 2) contains 0" in out.err
    assert "warning" not in out.out


def test_measures_and_json(capsys):
    assert run_command(["measures", "--space", "bergman", "--orders", "0,1,2", "--r-tilde", "0.5",
                        "--m-list", "1", "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["mass"][1] == pytest.approx(0.5 ** 4, rel=1e-12)


def test_demo_equidistribution_and_plot(tmp_path):
    out, svg = tmp_path / "d.csv", tmp_path / "d.svg"
    assert run_command(["demo-equidistribution", "--orders", "32,64", "--out", str(out),
                        "--plot", str(svg)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert float(rows[0]["target"]) == pytest.approx(0.25, abs=1e-3)
    assert svg.read_text().startswith("<svg")


def test_binary_matrix_output(tmp_path):
    out = tmp_path / "m.bin"
    assert run_command(["matrix", "--symbol", "x", "--N", "2", "--out", str(out)]) == 0
    assert out.read_bytes()[:4] == b"RCTM"
    assert run_command(["matrix", "--symbol", "x", "--N", "2", "--format", "binary"]) == 1


def test_unbounded_symbol_exit_1(capsys):
    assert run_command(["matrix", "--symbol", "x/(1 - r)", "--N", "2"]) == 1
    assert "unbounded" in capsys.readouterr().err


def test_numerical_failure_exit_2(monkeypatch, capsys):
    def broken(a):
        raise np.linalg.LinAlgError("no convergence")
    monkeypatch.setattr(np.linalg, "eigh", broken)
    assert run_command(["spectrum", "--symbol", "cos(theta)", "--N", "3"]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_unwritable_output_dir(capsys):
    assert run_command(["moments", "--out", "/nonexistent-dir/x.csv"]) == 1
    assert "not writable" in capsys.readouterr().err


def test_selftest():
    assert run_command(["selftest"]) == 0


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "szego_lab", "matrix", "--symbol", "1", "--N", "1"],
                         capture_output=True, text=True, cwd=tmp_path)
    assert res.returncode == 0 and json.loads(res.stdout)["order"] == 1
