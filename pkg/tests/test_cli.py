"""End-to-end CLI behavior: flag validation, emission formats, determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

import kfk
from kfk.cli import load_user_function, main
from kfk.sieve import read_table


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_mod3_worked_example(capsys):
    code, out, _ = run_cli(capsys, "mod3", "--x", "10")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "x,r0,r1,r2,T0,T1,T2,K,density0"
    assert lines[1].startswith("10,3,4,3,1,1,1,6,")


def test_density_rejects_x_zero(capsys):
    code, _, err = run_cli(capsys, "density", "--f", "tau", "--x", "0")
    assert code == 2
    assert "x must be >= 1" in err


def test_density_csv_final_row(capsys):
    code, out, _ = run_cli(capsys, "density", "--f", "tau", "--x", "100000")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "x,f,n_plus,density"
    last = lines[-1].split(",")
    assert last[0] == "100000" and last[1] == "tau"
    assert abs(float(last[3]) - 0.67) <= 0.02


def test_density_points_flag(capsys):
    code, out, _ = run_cli(capsys, "density", "--f", "omega", "--x", "1000",
                           "--points", "10,100,1000")
    assert code == 0
    rows = out.strip().split("\n")[1:]
    assert [r.split(",")[0] for r in rows] == ["10", "100", "1000"]
    assert rows[0].split(",")[2] == "8"


def test_multiplicity_json(capsys):
    code, out, _ = run_cli(capsys, "multiplicity", "--f", "tau", "--x", "10")
    assert code == 0
    payload = json.loads(out)
    assert payload["n_plus"] == 6
    assert payload["histogram"] == {"0": 4, "1": 5, "2": 1}
    assert payload["in_range_preimages"] == 7


def test_cdf_csv(capsys):
    code, out, _ = run_cli(capsys, "cdf", "--x", "10", "--grid", "10")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "lambda,phi_x"
    assert lines[1] == "0.000000,0.000000"
    assert lines[-1] == "1.000000,1.000000"
    assert lines[6] == "0.500000,0.500000"


def test_bound_mean_json(capsys):
    code, out, _ = run_cli(capsys, "bound", "--f", "tau", "--x", "10", "--c", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["sum_f"] == 27
    assert payload["bound_exact"] == "27/40"
    assert payload["actual"] == 4
    assert payload["holds"] is True


def test_bound_integral_json(capsys):
    code, out, _ = run_cli(capsys, "bound", "--method", "integral", "--x", "1000",
                           "--grid", "100")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"x", "g", "lower", "upper", "bound"}
    assert payload["lower"] <= payload["upper"]
    assert payload["bound"] == pytest.approx(0.5 + payload["upper"])


def test_energy_json(capsys):
    code, out, _ = run_cli(capsys, "energy", "--f", "tau", "--x", "10")
    assert code == 0
    payload = json.loads(out)
    assert payload["energy"] == 14
    assert payload["image_size"] == 8
    assert payload["cs_bound"] == 8


def test_proofset_csv(capsys):
    code, out, _ = run_cli(capsys, "proofset", "--x", "16")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,l,p"
    assert lines[1] == "5,1,5"
    assert lines[-1] == "15,3,5"


def test_constants_json(capsys):
    code, out, _ = run_cli(capsys, "constants")
    assert code == 0
    payload = json.loads(out)
    cat = kfk.catalog().as_dict()
    assert set(payload) == set(cat)
    for name, value in payload.items():
        assert value == pytest.approx(cat[name], rel=1e-14)
    assert f"{payload['c_mod3']:.6f}" == "0.394230"


def test_diagnose_json(capsys):
    code, out, _ = run_cli(capsys, "diagnose", "--x", "10000", "--y", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["x"] == 10000
    assert payload["reciprocal_sum_large"] <= 0.2
    assert 0.0 <= payload["smooth_shift_changed"] <= 1.0


@pytest.mark.parametrize(
    "argv",
    [
        ["density", "--f", "omega", "--x", "2000"],
        ["mod3", "--x", "1000"],
        ["cdf", "--x", "500", "--grid", "50"],
        ["constants"],
        ["proofset", "--x", "100"],
        ["energy", "--f", "tau", "--x", "500", "--set", "proofset"],
    ],
)
def test_rerun_byte_identical(tmp_path, capsys, argv):
    a, b = tmp_path / "a.out", tmp_path / "b.out"
    for path in (a, b):
        code, _, _ = run_cli(capsys, *argv, "--output-path", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().endswith(b"\n")
    assert b"\r" not in a.read_bytes()


def test_tabulate_cache_roundtrip(tmp_path, capsys):
    cache = tmp_path / "phi.kfkt"
    code, out, _ = run_cli(capsys, "tabulate", "--f", "phi", "--x", "5000",
                           "--cache", str(cache))
    assert code == 0 and out == ""
    table = read_table(cache)
    direct = kfk.tabulate("phi", (1, 5001))
    assert np.array_equal(table.values, direct.values)


def test_tabulate_csv_window(capsys):
    code, out, _ = run_cli(capsys, "tabulate", "--f", "tau", "--lo", "1",
                           "--hi", "11")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,value"
    assert lines[1] == "1,1"
    assert lines[10] == "10,4"


def test_tabulate_rejects_reversed_interval(capsys):
    code, _, err = run_cli(capsys, "tabulate", "--f", "tau", "--lo", "10",
                           "--hi", "2")
    assert code == 2
    assert "interval" in err


def test_threads_flag_gives_identical_output(capsys):
    _, out1, _ = run_cli(capsys, "density", "--f", "phi", "--x", "30000",
                         "--segment-length", "4096", "--threads", "4")
    _, out2, _ = run_cli(capsys, "density", "--f", "phi", "--x", "30000")
    assert out1 == out2


def test_user_function_parity_table(tmp_path, capsys):
    path = tmp_path / "parity.csv"
    path.write_text("k,f\n" + "".join(f"{k},{k % 2}\n" for k in range(1, 101)))
    table = load_user_function(path)
    assert table.values[:4].tolist() == [1, 0, 1, 0]
    code, out, _ = run_cli(capsys, "density", "--f", str(path), "--x", "100")
    assert code == 0
    assert out.strip().split("\n")[-1].split(",")[2] == "50"


def test_user_function_gap_names_line(tmp_path, capsys):
    path = tmp_path / "gap.csv"
    path.write_text("1,1\n2,0\n4,1\n")
    with pytest.raises(ValueError, match="line 3"):
        load_user_function(path)
    code, _, err = run_cli(capsys, "density", "--f", str(path), "--x", "3")
    assert code == 1
    assert "line 3" in err


def test_user_function_rejects_negative(tmp_path):
    path = tmp_path / "neg.csv"
    path.write_text("1,1\n2,-5\n")
    with pytest.raises(ValueError, match="negative"):
        load_user_function(path)


def test_config_file_defaults_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("x = 1000\nf = tau\n# comment\n")
    code, out, _ = run_cli(capsys, "density", "--config", str(cfg))
    assert code == 0
    assert out.strip().split("\n")[-1].split(",")[0] == "1000"
    code, out, _ = run_cli(capsys, "density", "--config", str(cfg), "--x", "100")
    assert out.strip().split("\n")[-1].split(",")[0] == "100"


def test_unknown_flag_exits_2(capsys):
    code, _, _ = run_cli(capsys, "density", "--frobnicate", "1")
    assert code == 2


def test_missing_x_exits_2(capsys):
    code, _, err = run_cli(capsys, "cdf")
    assert code == 2
    assert "--x" in err


def test_module_entry_point_runs():
    out = subprocess.run(
        [sys.executable, "-m", "kfk", "constants"], capture_output=True, text=True
    )
    assert out.returncode == 0
    assert "zeta3" in out.stdout
