import json
from pathlib import Path

import jsonschema
import pytest

from senslat import cli

GOLDEN = Path(__file__).parent / "golden"
SCHEMA = json.loads((Path(cli.__file__).parent / "report.schema.json").read_text())

GOLDEN_CASES = {
    "fn_measure_sorted": ["fn", "measure", "--table", "D18B", "--n", "4"],
    "verify_theorem3_n2": ["verify", "theorem3", "--n", "2"],
    "verify_theorem4": ["verify", "theorem4"],
    "verify_theorem9_n3": ["verify", "theorem9", "--n", "3"],
    "bounds_const_4": ["bounds", "const", "--l", "4"],
    "search_exhaustive_2": ["search", "exhaustive", "--n", "2", "--threads", "1"],
}


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def stable(report):
    report = dict(report)
    report.pop("timing")
    return report


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name, capsys):
    code, out, _ = run(GOLDEN_CASES[name], capsys)
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    want = json.loads((GOLDEN / f"{name}.json").read_text())
    assert stable(report) == want


def test_sorted_file(tmp_path, capsys):
    p = tmp_path / "sorted.tt"
    p.write_text("n=4\nD18B\n")
    code, out, _ = run(["fn", "measure", "--file", str(p)], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["results"]["s"] == 2 and rep["results"]["bs"] == 3


@pytest.mark.parametrize("argv", [
    ["verify", "theorem5"],
    ["verify", "theorem6", "--n", "3"],
    ["verify", "theorem7", "--n", "3"],
    ["verify", "theorem3", "--n", "3", "--samples", "2000", "--seed", "4"],
    ["verify", "kk", "--n", "3"],
    ["verify", "kk", "--table", "D18B", "--n", "4"],
    ["color", "measure", "--n", "2"],
    ["search", "random", "--n", "4", "--samples", "50", "--seed", "2"],
])
def test_verifications_pass_and_validate(argv, capsys):
    code, out, _ = run(argv, capsys)
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert code == 0 and rep["passed"]
    assert rep["check"].endswith(argv[1])


def test_seed_reproducible(capsys):
    argv = ["search", "random", "--n", "4", "--samples", "80", "--seed", "7"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert stable(json.loads(a)) == stable(json.loads(b))
    assert json.loads(a)["results"]["seed"] == 7


def test_build_and_reduce_roundtrip(tmp_path, capsys):
    spec = tmp_path / "slice2.json"
    code, _, _ = run(["color", "build", "--name", "slice", "--n", "2", "--out", str(spec)], capsys)
    assert code == 0 and spec.exists()
    cert = tmp_path / "cert.json"
    code, _, _ = run(["reduce", "color-to-fn", "--spec", str(spec), "--out", str(cert)], capsys)
    assert code == 0
    code, out, _ = run(["reduce", "check", "--file", str(cert)], capsys)
    assert code == 0 and json.loads(out)["results"]["problems"] == []

    tt = tmp_path / "sorted.tt"
    run(["fn", "build", "--name", "sorted", "--out", str(tt)], capsys)
    cert2 = tmp_path / "cert2.json"
    code, _, _ = run(["reduce", "fn-to-color", "--file", str(tt), "--blocks", "1;2;3,4",
                      "--x", "0100", "--out", str(cert2)], capsys)
    assert code == 0
    data = json.loads(cert2.read_text())
    data["witnesses"]["s_f"]["value"] = 99
    cert2.write_text(json.dumps(data))
    code, out, _ = run(["reduce", "check", "--file", str(cert2)], capsys)
    assert code == 1 and json.loads(out)["results"]["problems"]


def test_failed_check_exits_one(tmp_path, capsys):
    # a sliced coloring whose red sensitivity is 2 cannot be repeated; a
    # hand-written repeated spec of it fails the s^R = copies check instead
    spec = {"kind": "repeated", "copies": 2,
            "inner": {"kind": "sliced", "d": 2, "slices": [
                {"axis": 0, "c": 3, "zeros": []}, {"axis": 1, "c": 3, "zeros": []}]}}
    p = tmp_path / "rep.json"
    p.write_text(json.dumps(spec))
    code, out, _ = run(["verify", "theorem7", "--spec", str(p)], capsys)
    rep = json.loads(out)
    assert code == 1 and not rep["passed"]
    assert any(not q["holds"] for q in rep["inequalities"])


@pytest.mark.parametrize("argv, fragment", [
    (["fn", "measure"], "--file"),
    (["fn", "measure", "--table", "D18B"], "--n"),
    (["fn", "build", "--name", "rubinstein-f", "--n", "6"], "36 variables"),
    (["search", "exhaustive", "--n", "5"], "n <= 4"),
    (["reduce", "fn-to-color", "--table", "D18B", "--n", "4", "--blocks", "1,2"], "not sensitive"),
    (["color", "measure", "--spec", "/nonexistent.json"], "No such file"),
])
def test_usage_errors_exit_two(argv, fragment, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2 and out == ""
    assert fragment in err


def test_argparse_errors_exit_two(capsys):
    assert cli.main(["verify", "theorem99"]) == 2
    assert cli.main(["fn", "measure", "--box", "5"]) == 2
