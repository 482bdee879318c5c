from __future__ import annotations

import json
import subprocess
import sys

import pytest

from mdhom import cli
from mdhom.oracle import CrosscheckReport

from conftest import DATA

EGG = str(DATA / "eggers_example.json")
C = str(DATA / "reducible_C.json")
D = str(DATA / "reducible_D.json")


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_table(capsys):
    code, out, _ = run(capsys, "compute", EGG)
    assert code == 0
    assert "[37/12, inf]       4      4" in out
    assert "basis at inf: C1 C2 C3 C4" in out


def test_compute_at(capsys, tmp_path):
    dest = tmp_path / "f.json"
    code, out, _ = run(capsys, "compute", EGG, "--at", "11/4", "--json", str(dest))
    assert code == 0
    assert out.splitlines()[:3] == ["b = 11/4", "rank0 = 3", "rank1 = 3"]
    assert "h1^(11/4,1) = [2 4 4]" in out
    obj = json.loads(dest.read_text())
    assert obj["inf_basis"] == ["C1", "C2", "C3", "C4"]


def test_compute_below_one(capsys):
    code, out, _ = run(capsys, "compute", EGG, "--at", "1/2")
    assert code == 0
    assert "rank0 = 1" in out and "rank1 = 0" in out
    assert "h1^(inf,1/2) = [0x4]" in out


def test_tree_formats(capsys):
    code, out, _ = run(capsys, "tree", EGG)
    assert code == 0
    assert json.loads(out)["branches"] == ["C1", "C2", "C3", "C4"]
    code, out, _ = run(capsys, "tree", EGG, "--dot")
    assert out.startswith("digraph")


def test_jumps(capsys):
    assert run(capsys, "jumps", EGG)[1].split() == ["1", "3/2", "5/2", "11/4", "37/12"]


def test_compare(capsys):
    assert run(capsys, "compare", C, D)[1] == "NotDistinguished\n"
    assert run(capsys, "compare", C, D, "--framed")[1] == "framed: false\n"
    assert run(capsys, "compare", C, C, "--framed")[1] == "framed: true\n"


def test_multiplicities(capsys):
    code, out, _ = run(capsys, "multiplicities", str(DATA / "cusp.json"), "--json")
    assert code == 0
    assert json.loads(out)["tangents"][0]["total"] == 2
    assert "total" in run(capsys, "multiplicities", C)[1]


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", EGG, "--random", "3", "--seed", "5")
    assert code == 0
    assert out.endswith("4/4 curves passed\n")
    code, out, _ = run(capsys, "oracle", "--random", "2", "--json")
    assert [r["passed"] for r in json.loads(out)] == [True, True]


def test_oracle_failure_exit_code(capsys, monkeypatch):
    def failing(curve):
        report = CrosscheckReport("stub")
        report.add("forced", False, "x")
        return report

    monkeypatch.setattr(cli, "crosscheck", failing)
    assert run(capsys, "oracle", EGG)[0] == 2


def test_cone(capsys):
    code, out, _ = run(capsys, "cone", str(DATA / "circle.json"), "--b", "3/2")
    assert code == 0
    rows = [line.split() for line in out.splitlines()]
    assert rows[1][:3] == ["0", "1", "1"] and rows[2][:3] == ["1", "0", "1"]
    code, out, _ = run(capsys, "cone", str(DATA / "circle_rel.json"), "--b", "3/2", "--json")
    assert json.loads(out)["below"][0] == 0


def test_normalize(capsys):
    code, out, _ = run(capsys, "normalize", EGG, "--text")
    assert out.splitlines()[2] == "C3: x^(3/2) + x^(11/4) + x^(37/12)"
    code, out, _ = run(capsys, "normalize", str(DATA / "cusp.json"))
    assert json.loads(out)["branches"][0]["terms"][0]["exp"] == [3, 2]


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "missing.json"],
        ["compute", EGG, "--at", "0"],
        ["compute", EGG, "--at", "x"],
        ["cone", str(DATA / "circle.json"), "--b", "1/2"],
        ["oracle"],
    ],
)
def test_bad_input_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err.startswith("error:")


def test_bad_series_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"branches": [{"series": "x^(1/2)"}]}))
    code, _, err = run(capsys, "compute", str(bad))
    assert code == 1 and "change coordinates" in err


def test_conjugacy_warning(capsys, tmp_path):
    f = tmp_path / "conj.json"
    f.write_text(json.dumps({"branches": [{"series": "x^(3/2)"}, {"series": "-x^(3/2) + x^2"}]}))
    code, _, err = run(capsys, "tree", str(f))
    assert code == 0 and err.startswith("warning:")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mdhom", "jumps", str(DATA / "cusp.json")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.split() == ["1", "3/2"]
