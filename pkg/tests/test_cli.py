import csv
import io
import json
import subprocess
import sys

import pytest

from achieveset.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_gen(capsys):
    code, out, _ = run(["gen", '{"kind":"geometric","q":"1/3"}'], capsys)
    assert code == 0 and json.loads(out)["derived"]["total"] == "1/2"
    code, out, _ = run(["gen", '{"kind":"guthrie-nymann"}'], capsys)
    assert json.loads(out)["derived"]["total"] == "5/3"
    code, out, err = run(["gen", '{"kind":"jones-x","q":"3/11"}'], capsys)
    assert code == 0 and "outside verified range [1/6,2/11)" in err
    assert json.loads(out)["warnings"] == ["outside verified range [1/6,2/11)"]


def test_gen_schema_errors(capsys):
    code, _, err = run(["gen", '{"kind":"geometric","q":"2"}'], capsys)
    assert code == 2 and "q" in err
    code, _, err = run(["gen", '{"kind":"geometric",\n"q":}'], capsys)
    assert code == 2 and "line 2" in err


def test_classify_and_replay(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, _, _ = run(["classify", '{"kind":"geometric","q":"1/3"}', "-o", str(path)], capsys)
    assert code == 0 and json.loads(path.read_text())["verdict"] == "CantorLike"
    code, out, _ = run(["verify", "--certificate", str(path)], capsys)
    assert code == 0 and json.loads(out)["ok"]
    obj = json.loads(path.read_text())
    obj["certificate"]["n0"] = 0
    path.write_text(json.dumps(obj))
    code, _, _ = run(["verify", "--certificate", str(path)], capsys)
    assert code == 1


def test_hausdorff(capsys):
    code, out, _ = run(["hausdorff", "[0,1]", "[2,3]"], capsys)
    assert code == 0 and out == "2\n"
    code, out, _ = run(["hausdorff", '{"intervals":[["0","1","0","1"],["1","1","1","1"]]}', "[0,1]"], capsys)
    assert out == "1/2\n"


def test_approx(capsys):
    code, out, _ = run(["approx", '{"kind":"guthrie-nymann"}', "--depth", "2"], capsys)
    data = json.loads(out)
    assert code == 0 and data["error_bound"] == "5/12"
    assert data["outer"]["intervals"][-1] == ["5", "4", "5", "3"]
    code, out, _ = run(["approx", '{"kind":"geometric","q":"1/3"}', "--eps", "1/100"], capsys)
    assert json.loads(out)["depth"] == 4


def test_sweep_transitions(capsys):
    code, out, _ = run(["sweep", "--family", "jones-x", "--param", "q", "--from", "1/7", "--to", "1/5",
                        "--steps", "21"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 21
    assert list(rows[0]) == ["param", "verdict", "n0", "error_bound", "components"]
    from fractions import Fraction as F
    for r in rows:
        q = F(r["param"])
        if F(1, 6) <= q < F(2, 11):
            assert r["verdict"] == "Cantorval"
        elif q >= F(2, 11):
            assert r["verdict"] == "FiniteUnionOfIntervals" and r["n0"] == "1"
        else:
            assert r["verdict"] != "Cantorval"


def test_verify_suite(capsys):
    code, out, _ = run(["verify", "--suite", "kakeya"], capsys)
    assert code == 0 and out.count("PASS") == 6


def test_usage_errors(capsys):
    assert run(["bogus"], capsys)[0] == 2
    assert run(["verify"], capsys)[0] == 2
    assert run(["gen", "/nonexistent.json"], capsys)[0] == 2
    assert run(["classify", '{"kind":"explicit","terms":["1"]}'], capsys)[0] == 2
    assert run(["gen", '{"kind":"geometric","q":"1/3"}', "--precision", "32"], capsys)[0] == 2


@pytest.mark.parametrize("argv", [
    ["classify", '{"kind":"jones-x","q":"1/6"}'],
    ["approx", '{"kind":"pow-mixture","betas":["1"],"exponents":["3/2"]}', "--depth", "6"],
    ["gen", '{"kind":"spaceability","t":["1","-1/3"]}'],
])
def test_determinism_and_round_trip(argv, capsys):
    first = run(argv, capsys)[1]
    second = run(argv, capsys)[1]
    assert first == second
    data = json.loads(first)
    assert json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n" == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "achieveset", "hausdorff", "[0,0] [1,1]", "[0,1]"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1/2\n"
