import csv
import json
import math

import pytest

from noonqed.cli import main

PROTOCOLS = __import__("pathlib").Path(__file__).resolve().parents[1] / "protocols"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def test_inversion_csv(tmp_path, capsys):
    out = tmp_path / "w.csv"
    code, _, _ = run_cli(capsys, "inversion", "--n0", "2", "--tau-max", "4", "--steps", "801", "--out", str(out))
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["tau", "w"] and len(rows) == 802
    assert float(rows[1][1]) == 1.0
    for tau, w in rows[1:]:
        assert abs(float(w) - math.cos(2 * math.sqrt(12) * float(tau))) < 1e-10


def test_inversion_detuned_minimum(tmp_path, capsys):
    out = tmp_path / "w.csv"
    run_cli(capsys, "inversion", "--delta", "-0.75", "--out", str(out))
    ws = [float(r["w"]) for r in csv.DictReader(out.open())]
    assert min(ws) == pytest.approx(1 - 24 / 12.140625, abs=5e-4)


def test_csv_is_byte_identical_across_runs(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run_cli(capsys, "sweep-chi", "--steps", "5", "--delta", "0", "--delta", "-0.75", "--out", str(path))
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(a.open()))
    assert list(rows[0]) == ["chi", "delta", "fidelity", "p_ground"] and len(rows) == 10
    at_origin = {float(r["delta"]): float(r["fidelity"]) for r in rows if float(r["chi"]) == 0}
    assert at_origin[0.0] == pytest.approx(0.94, abs=0.005)
    assert at_origin[-0.75] < at_origin[0.0]


def test_unwritable_output(capsys):
    code, _, err = run_cli(capsys, "inversion", "--out", "/nonexistent-dir/w.csv")
    assert code == 2 and "error" in err


def test_noon_report(capsys):
    code, out, _ = run_cli(capsys, "noon", "--tau", "3.16")
    vals = kv(out)
    assert code == 0
    assert float(vals["fidelity_ground"]) == pytest.approx(0.94, abs=0.005)
    assert float(vals["p_ground"]) == pytest.approx(0.5, abs=1e-3)
    assert float(vals["fidelity_excited"]) == pytest.approx(0.94, abs=0.005)


def test_noon_zero_time_and_stark_shift(capsys):
    _, out, _ = run_cli(capsys, "noon", "--tau", "0", "--report", "json")
    assert json.loads(out)["fidelity_ground"] == 0
    _, out, _ = run_cli(capsys, "noon", "--chi", "0.5", "--report", "json")
    assert json.loads(out)["fidelity_ground"] < 0.9394


def test_find_tau(capsys):
    code, out, _ = run_cli(capsys, "find-tau", "--lo", "2.5", "--hi", "3.5", "--tol", "1e-4", "--report", "json")
    res = json.loads(out)
    assert code == 0 and abs(res["tau_star"] - 3.16) <= 0.05 and res["fidelity"] >= 0.93


def test_find_tau_usage_error(capsys):
    code, _, err = run_cli(capsys, "find-tau", "--lo", "3", "--hi", "2")
    assert code == 1 and "lo" in err


def test_bad_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["noon", "--bogus"])
    assert info.value.code == 1


def test_run_twotwo(capsys):
    code, out, _ = run_cli(capsys, "run", str(PROTOCOLS / "twotwo.qproto"), "--report", "json")
    res = json.loads(out)
    assert code == 0
    assert res["joint_postselect_probability"] == pytest.approx(math.sin(math.sqrt(2) * 3.16) ** 4, abs=1e-9)
    assert res["distribution_A"] == {"2": pytest.approx(1.0)} and res["distribution_B"] == {"2": pytest.approx(1.0)}


def test_run_noon_matches_noon_command(capsys):
    _, out, _ = run_cli(capsys, "run", str(PROTOCOLS / "noon.qproto"), "--report", "json")
    res = json.loads(out)
    _, out, _ = run_cli(capsys, "noon", "--report", "json")
    ref = json.loads(out)
    assert res["noon_n"] == 4
    assert res["fidelity_plus"] == pytest.approx(ref["fidelity_ground"], abs=1e-14)
    assert res["joint_postselect_probability"] == pytest.approx(ref["p_ground"], abs=1e-14)


def test_run_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.qproto"
    bad.write_text("interact C 1.0\n")
    code, _, err = run_cli(capsys, "run", str(bad))
    assert code == 1 and ":1:10:" in err
    abort = tmp_path / "abort.qproto"
    abort.write_text("prepare atom g\ninteract A 1.0\nmeasure atom e\n")
    code, _, err = run_cli(capsys, "run", str(abort))
    assert code == 2 and "step 2" in err


def test_run_with_seed_is_reproducible(capsys):
    outs = [run_cli(capsys, "run", str(PROTOCOLS / "noon.qproto"), "--seed", "3")[1] for _ in range(2)]
    assert outs[0] == outs[1] and "sampled" in outs[0]


def test_validate(capsys):
    code, out, _ = run_cli(capsys, "validate", "--cutoff", "24", "--trials", "200", "--seed", "1")
    assert code == 0 and float(kv(out)["max_deviation"]) < 1e-9
    code, out, _ = run_cli(capsys, "validate", "--cutoff", "6", "--trials", "50", "--support", "2")
    assert code == 0
    code, out, _ = run_cli(capsys, "validate", "--cutoff", "24", "--trials", "1", "--support", "23")
    vals = kv(out)
    assert vals["precondition_rejections"] == "1" and vals["max_deviation"] == "n/a"
