import json
import re

import pytest

from berklocus.cli import main
from berklocus.report import assert_no_floats


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_analyze_example_33(capsys):
    code, doc = run_json(capsys, "analyze", "(z^2+1)/(z+1)", "-p", "3")
    assert code == 0 and doc["schema"] == "berklocus/1"
    res = doc["result"]
    assert res["connected"] is True and res["finite"] is False and res["census"]["count"] == 1
    assert_no_floats(doc)


def test_analyze_z_cubed(capsys):
    code, doc = run_json(capsys, "analyze", "z^3", "-p", "3")
    res = doc["result"]
    assert code == 0 and res["finite"] is True and res["census"]["count"] == 5


def test_census_z_squared(capsys):
    code, doc = run_json(capsys, "census", "z^2", "-p", "3")
    assert code == 0 and doc["result"]["census"]["count"] == 3


def test_reduce_reports_bad_direction(capsys):
    code, doc = run_json(capsys, "reduce", "(z^2+p)/z", "-p", "3")
    res = doc["result"]
    assert code == 0 and res["good_reduction"] is False
    bad = [d["direction"] for d in res["gauss_directions"] if d["class"] == "bad"]
    assert bad == ["0"]


def test_fixed_points_and_text_format(capsys):
    code, doc = run_json(capsys, "fixed-points", "z^2", "-p", "2")
    classes = sorted(x["class"] for x in doc["result"]["fixed_points"])
    assert code == 0 and classes == ["attracting", "superattracting", "superattracting"]
    code, out = run(capsys, "fixed-points", "z^2", "-p", "2", "--format", "text")
    assert code == 0 and "superattracting" in out


def test_verify(capsys):
    code, doc = run_json(capsys, "verify", "z^2", "-p", "3", "--grid-step", "1/2", "--grid-depth", "6")
    assert code == 0
    fixed = [s for s in doc["result"]["oracle"]["samples"] if s["fixed"]]
    assert fixed and all(s["direction"] == "1" for s in fixed)


def test_conjugate_flag_keeps_verdicts(capsys):
    _, a = run_json(capsys, "analyze", "(z^2+1)/(z+1)", "-p", "5")
    code, b = run_json(capsys, "analyze", "(z^2+1)/(z+1)", "-p", "5", "--conjugate", "(5z+1)/(z+2)")
    assert code == 0
    for key in ("connected", "finite"):
        assert a["result"][key] == b["result"][key]
    assert a["result"]["census"]["count"] == b["result"]["census"]["count"]


def test_sketch_dot_ids(capsys):
    code, out = run(capsys, "sketch", "z^2", "-p", "3", "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    ids = set(re.findall(r'^\s*("?[\w:]+"?) \[', out, re.M))
    assert {"gauss", '"dir:0"', '"dir:1"', '"dir:inf"', '"iso:0"', '"iso:1"'} <= ids
    code, out = run(capsys, "sketch", "(z^2+z+p^2)/(z^2+1)", "-p", "3", "--format", "dot")
    assert '"int:0"' in out and "identity tangent" in out


@pytest.mark.parametrize(
    "argv,code,err",
    [
        (["analyze", "z +* 1", "-p", "3"], 2, "PARSE"),
        (["analyze", "z^2", "-p", "4"], 2, "PARSE"),
        (["analyze", "z", "-p", "3"], 2, "PARSE"),
        (["analyze", "(z^2+z+p^2)/(z^2+1)", "-p", "3", "--precision", "2"], 3, "PRECISION"),
        (["analyze", "(z^2+p)/z", "-p", "3"], 4, "INCONCLUSIVE"),
        (["census", "(z^2-z)/p", "-p", "3"], 4, "INCONCLUSIVE"),
    ],
)
def test_exit_codes(capsys, argv, code, err):
    got, doc = run_json(capsys, *argv)
    assert got == code and doc["error"]["code"] == err
    assert "result" not in doc


def test_parse_error_offset_in_document(capsys):
    _, doc = run_json(capsys, "analyze", "(z+1", "-p", "3")
    assert doc["error"]["offset"] == 4


def test_ramified_tower_flag(capsys):
    code, doc = run_json(capsys, "analyze", "(z^2+p)/z", "-p", "3", "--ram", "2")
    assert code == 0 and doc["result"]["census"]["count"] >= 1
    assert doc["result"]["totally_ramified_point"]["rlog"] == "-1/2"


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["analyze", "z^2"])
    assert info.value.code == 2
