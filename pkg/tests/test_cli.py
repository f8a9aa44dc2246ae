import json
import subprocess
import sys
from pathlib import Path

import pytest

from kummer3 import __version__
from kummer3.cli import main, run

CURVES = Path(__file__).resolve().parent.parent / "curves"


def report(*argv):
    status, rep, _ = run([str(a) for a in argv])
    return status, rep


def test_dims_reproduces_table():
    status, rep = report("dims", "--curve", CURVES / "table2.json", "--seed", 1)
    assert status == 0
    assert rep["result"] == {"m": [8, 36, 120, 330], "e": [8, 36, 112, 260], "d": [8, 35, 112, 260]}
    assert rep["version"] == __version__ and len(rep["primes"]) >= 2
    assert rep["curve"]["f"] == ["1", "0", "0", "0", "0", "0", "0", "1"]


def test_rank35():
    status, rep = report("rank35", "--curve", CURVES / "split7.json")
    assert status == 0
    assert rep["result"]["rank"] == 35 and rep["result"]["kernel_is_R1"]


def test_kappa_of_identity(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"field": "Q", "f": ["1", "0", "0", "0", "0", "0", "0", "1"]}))
    status, rep = report("kappa", "--curve", path)
    assert status == 0 and rep["result"] == {"x": ["0"] * 7 + ["1"]}


def test_kappa_of_supplied_point(tmp_path):
    path = tmp_path / "c.json"
    curve = json.loads((CURVES / "split7.json").read_text())
    curve["point"] = {"a": ["0", "2", "-3", "1"], "b": []}
    path.write_text(json.dumps(curve))
    status, rep = report("kappa", "--curve", path)
    assert rep["result"]["x"] == ["1", "3", "2", "0", "84", "-591", "786", "476"]


def test_height_report():
    status, rep = report("height", "--curve", CURVES / "height_example.json", "--tol", "1/1000")
    assert status == 0
    assert rep["result"]["converged"] and rep["result"]["estimate"] > 0.5


def test_check_d4_and_determinism(tmp_path):
    args = ["check-d4", "--curve", CURVES / "table2.json", "--seed", 7]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main([str(x) for x in args + ["--out", a]]) == 0
    assert main([str(x) for x in args + ["--out", b]]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["result"] == {"d4": 260, "holds": True}


def test_wt_then_verify(tmp_path):
    out = tmp_path / "wt.json"
    assert main(["wt", "--curve", str(CURVES / "split_fp.json"), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["result"]["count"] == 64 and rep["result"]["square_is_scalar"]
    status, ver = report("verify", out)
    assert status == 0 and ver["result"]["verified"]


def test_relations_then_verify(tmp_path):
    out = tmp_path / "rel.json"
    assert main(["relations", "--curve", str(CURVES / "split_fp.json"), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())["result"]
    assert rep["quadric_is_R1"]
    assert {k: rep["split"][k] for k in ("relations", "r1_multiples", "quotient")} == \
        {"relations": 70, "r1_multiples": 36, "quotient": 34}
    status, ver = report("verify", out)
    assert status == 0 and ver["result"]["verified"]


def test_tampered_report_fails_verification(tmp_path):
    out = tmp_path / "rel.json"
    main(["relations", "--curve", str(CURVES / "split_fp.json"), "--out", str(out)])
    rep = json.loads(out.read_text())
    row = rep["result"]["quartic"]["basis"][5]
    j = next(i for i, v in enumerate(row) if v != "0")
    row[j] = str(int(row[j]) + 1)
    out.write_text(json.dumps(rep))
    status, ver = report("verify", out)
    assert status == 0 and ver["result"]["verified"] is False


def test_dup(tmp_path):
    out = tmp_path / "dup.json"
    assert main(["dup", "--curve", str(CURVES / "split_fp.json"), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())["result"]
    assert rep["verified"] and rep["solution_dim"] == 561
    assert rep["delta_e8"] == ["0"] * 7 + ["1"]
    f7 = 861169
    assert rep["delta_prime_e8"] == ["0"] * 7 + [str(f7 * f7 % 1000003)]
    status, ver = report("verify", out)
    assert ver["result"]["verified"]


def test_search():
    status, rep = report("search", "--curve", CURVES / "split7.json", "--bound", 1)
    assert status == 0
    xs = [p["x"] for p in rep["result"]["points"]]
    assert ["0"] * 7 + ["1"] in xs


@pytest.mark.parametrize("argv, kind", [
    (["dims"], "UsageError"),
    (["bogus"], "UsageError"),
    (["rank35", "--curve", "/nonexistent.json"], "FileNotFoundError"),
    (["rank35", "--curve", str(CURVES / "table2.json")], "DoesNotSplit"),
])
def test_errors_are_json(argv, kind):
    status, rep = report(*argv)
    assert status != 0 and rep["error"]["type"] == kind


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "kummer3.cli", "rank35", "--curve",
                           str(CURVES / "split7.json"), "--pretty"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["rank"] == 35
    assert "\n  " in proc.stdout


def test_thread_cap_is_validated(monkeypatch):
    monkeypatch.setenv("KUMMER3_THREADS", "0")
    status, rep = report("rank35", "--curve", CURVES / "split7.json")
    assert status == 2
    monkeypatch.setenv("KUMMER3_THREADS", "4")
    status, rep = report("rank35", "--curve", CURVES / "split7.json")
    assert status == 0


def test_height_report_with_huge_ladder():
    # late ladder steps have tens of thousands of digits
    status, rep = report("height", "--curve", CURVES / "height_example.json", "--tol", "1/10000",
                         "--max-n", 14)
    assert status == 0 and rep["result"]["converged"]
    assert max(h["bits"] for h in rep["result"]["ladder"]) > 20_000
