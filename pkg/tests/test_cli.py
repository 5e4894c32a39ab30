import json

import pytest

from collatz_census.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_level(capsys):
    code, out, _ = run(capsys, "level", "13")
    assert code == 0
    assert out.splitlines() == ["5  (ord2 = 3)", "1  (ord2 = 4)", "level 2"]
    assert run(capsys, "level", "1")[1] == "level 0\n"


@pytest.mark.parametrize("arg", ["4", "0", "abc", "-3"])
def test_level_bad_input(capsys, arg):
    assert run(capsys, "level", arg)[0] == 1


def test_level_unresolved(capsys):
    code, out, _ = run(capsys, "--cap", "2", "level", "7")
    assert code == 2 and "unresolved" in out
    assert run(capsys, "level", "7", "--cap", "2")[0] == 2


def test_level_big_number(capsys):
    n = 2**200 - 1
    code, out, _ = run(capsys, "level", str(n))
    assert code == 0 and out.splitlines()[-1].startswith("level ")


def test_census(capsys, tmp_path):
    code, out, err = run(capsys, "census", "100")
    assert code == 0
    assert "total 50" in err and "unresolved 0" in err
    code, out, err = run(capsys, "census", "10")
    assert "1,1" in out.splitlines()
    path = tmp_path / "c.json"
    code, out, _ = run(capsys, "census", "100", "--format", "json", "--out", str(path))
    assert code == 0 and "total 50" in out
    assert json.loads(path.read_text())["total"] == 50


def test_census_deterministic(capsys):
    outputs = {run(capsys, "census", "30001", "--shards", s)[1] for s in ("1", "3", "16")}
    assert len(outputs) == 1


def test_census_unresolved_exit(capsys):
    code, out, _ = run(capsys, "census", "1001", "--cap", "10")
    assert code == 2 and "unresolved," in out


def test_decompose_build_lift(capsys):
    code, out, _ = run(capsys, "decompose", "13")
    assert code == 0 and out.splitlines()[0] == "4,3"
    assert run(capsys, "decompose", "21")[0] == 1
    assert run(capsys, "decompose", "1")[0] == 1
    code, out, _ = run(capsys, "build", "4,3")
    assert code == 0 and out.splitlines()[0] == "13 (level 2 verified)"
    assert run(capsys, "build", "6")[0] == 1
    assert run(capsys, "build", "4,x")[0] == 1
    code, out, _ = run(capsys, "lift", "2,2")
    assert code == 0 and out.splitlines()[0] == "8,6 → 1813"
    assert run(capsys, "lift", "1,2")[0] == 1
    assert run(capsys, "lift", "3", "--strict")[0] == 1
    code, out, _ = run(capsys, "lift", "2,2", "--selector", "paper")
    assert code == 0 and out.splitlines()[0] == "8,8 → 7253"


def test_generate(capsys, tmp_path):
    code, out, err = run(capsys, "generate", "100", "1", "--budget", "2")
    assert code == 0
    assert out.splitlines() == ["u_tuple,v_tuple,n,admitted", "2,8,85,1"]
    assert "admitted 1" in err
    code, out, _ = run(capsys, "generate", "1000000", "2", "--budget", "safe", "--format", "json")
    d = json.loads(out)
    assert d["admitted"] == 1 and d["oversize"] == 0
    assert run(capsys, "generate", "100", "1", "--budget", "lots")[0] == 1


def test_omega(capsys):
    assert run(capsys, "omega", "5", "2")[1] == "3\n"
    assert run(capsys, "omega", "5", "2", "--least", "1")[1] == "10\n"


def test_bound(capsys, tmp_path):
    census_path = tmp_path / "c.json"
    run(capsys, "census", "100000", "--format", "json", "--out", str(census_path))
    code, out, _ = run(capsys, "bound", "100000", "--census", str(census_path))
    assert code == 0 and "pi(x,l) >= omega_safe" in out
    code, out, _ = run(capsys, "bound", "100000", "--rule", "paper", "--census", str(census_path))
    assert code == 0  # exit reflects safe links only
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "bound", "100000", "--csv", "--format", "json", "--out", str(report))
    assert out.splitlines()[0] == "x,l,pi_x,pi_x_l,omega_paper,omega_safe,binom,x_pow_theta"
    assert json.loads(report.read_text())["safe_ok"] is True
    assert run(capsys, "bound", "2")[0] == 1
    assert run(capsys, "bound", "1000", "--census", str(census_path))[0] == 1


def test_bound_rejects_csv_census(capsys, tmp_path):
    path = tmp_path / "c.csv"
    run(capsys, "census", "1000", "--out", str(path))
    assert run(capsys, "bound", "1000", "--census", str(path))[0] == 1


def test_bound_link_failure_exit(capsys, tmp_path):
    path = tmp_path / "c.json"
    run(capsys, "census", "10000", "--format", "json", "--out", str(path))
    d = json.loads(path.read_text())
    d["per_level"]["1"] = 0
    d["per_level"]["0"] += 6  # keep totals consistent, break the level-1 count
    path.write_text(json.dumps(d))
    code, _, err = run(capsys, "bound", "10000", "--census", str(path))
    assert code == 3 and "safe link failed" in err


def test_usage_errors(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "nosuch")[0] == 1
    assert run(capsys, "census", "10", "--shards", "0")[0] == 1
