import json
import subprocess
import sys

import pytest

from sparsehelly.cli import RunConfig, main, run_suite


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["generate", "--kind", "tangent-halfspaces", "--dim", "3", "--seed", "7",
                     "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["dim"] == 3 and len(doc["hrep"]) == 18


def test_select_then_verify(tmp_path, capsys):
    inst, cert = tmp_path / "q.json", tmp_path / "c.json"
    main(["generate", "--kind", "random-vpoly", "--dim", "3", "--seed", "2", "--out", str(inst)])
    assert main(["select", str(inst), "--mode", "swap", "--out", str(cert)]) == 0
    code, out, _ = run(["verify", str(inst), str(cert)], capsys)
    assert code == 0 and json.loads(out)["ok"]
    doc = json.loads(cert.read_text())
    doc["factor"] /= 100
    cert.write_text(json.dumps(doc))
    code, out, _ = run(["verify", str(inst), str(cert)], capsys)
    assert code == 1 and json.loads(out)["failed"] == "d"


def test_helly_john_oracle(tmp_path, capsys):
    inst = tmp_path / "k.json"
    main(["generate", "--kind", "tangent-halfspaces", "--dim", "2", "--n", "8", "--seed", "1",
          "--out", str(inst)])
    code, out, err = run(["helly", str(inst), "--mc-samples", "20000"], capsys)
    rep = json.loads(out)
    assert code == 0 and len(rep["sigma"]) <= 4 and "monte_carlo" in rep
    assert "diam ratio" in err
    code, out, _ = run(["john", str(inst)], capsys)
    assert code == 0 and json.loads(out)["outer_radius"] <= 2 * (1 + 1e-4)
    code, out, _ = run(["oracle", str(inst), "--objective", "diam"], capsys)
    assert code == 0 and json.loads(out)["evaluated"] == 1 + 8 + 28 + 56 + 70


def test_geometry_errors_exit_two(tmp_path, capsys):
    inst = tmp_path / "bad.json"
    inst.write_text(json.dumps({"dim": 2, "vrep": [[0, 0], [1, 0], [0, 1], [1, 1]]}))
    code, _, err = run(["select", str(inst)], capsys)
    assert code == 2 and "OriginNotInterior" in err


def test_suite_report_and_exit_code(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["suite", "--kind", "random-symmetric-vpoly", "--dim", "2", "--count", "5",
                 "--seed", "1", "--out", str(out)])
    rep = json.loads(out.read_text())
    assert code == 0
    assert rep["aggregate"]["instances"] == 5 and rep["aggregate"]["passed"] == 5
    assert rep["aggregate"]["max_mu_star"] <= 6 * (1 + 1e-3)


def test_empty_suite_passes():
    report, code = run_suite(RunConfig("suite", dim=2, count=0, kind="tangent-halfspaces"))
    assert code == 0 and report["rows"] == []


def test_parallel_suite_matches_serial():
    cfg = RunConfig("suite", dim=2, count=4, seed=3, kind="tangent-halfspaces")
    serial, _ = run_suite(cfg)
    parallel, _ = run_suite(RunConfig("suite", dim=2, count=4, seed=3, kind="tangent-halfspaces", jobs=2))
    assert serial == parallel


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "sparsehelly", "generate", "--kind", "cube", "--dim", "2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["kind"] == "cube"


def test_tolerance_flag(tmp_path, capsys):
    from sparsehelly import core

    old = core.tolerance()
    try:
        main(["--tol", "1e-7", "generate", "--kind", "cube", "--dim", "2", "--out", str(tmp_path / "c.json")])
        assert core.tolerance() == 1e-7
    finally:
        core.set_tolerance(old)


def test_unknown_kind_rejected():
    with pytest.raises(SystemExit):
        main(["generate", "--kind", "sphere", "--dim", "2"])
