# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

import json
from pathlib import Path

import pytest

from nilpiece.cli.nilpiece import run
from nilpiece.constants import DEFAULT_MODULI


def test_classify(test_data_path: Path, capsys):
    path = test_data_path / "regular-form.json"
    assert run(["nilpiece", "classify", "--input", str(path)]) == 0
    out, err = capsys.readouterr()
    doc = json.loads(out)
    assert doc["schema"] == "nilpiece/1"
    assert doc["profile"] == [[0, 1], [2, 1]]
    assert doc["filtration"]["top"] == 2
    assert "trace" not in doc


def test_classify_explain_yaml(test_data_path: Path, capsys):
    path = test_data_path / "regular-form.yaml"
    assert run(["nilpiece", "classify", "--input", str(path), "--explain"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [record["case"] for record in doc["trace"]] == ["m-large"]


def test_classify_demo(test_data_path: Path, capsys):
    assert run(["nilpiece", "classify", "--demo"]) == 0
    out, err = capsys.readouterr()
    assert json.loads(out) == json.loads(
        (test_data_path / "regular-form.json").read_text()
    )


def test_classify_output_file(test_data_path: Path, tmp_path: Path, capsys):
    path = test_data_path / "regular-form.json"
    output = tmp_path / "result.json"
    args = ["nilpiece", "classify", "--input", str(path), "--output", str(output)]
    assert run(args) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(output.read_text())["label"] == "0:1,2:1"


@pytest.mark.parametrize(
    "name, ret, diagnostic",
    [
        pytest.param("not-nilpotent.json", 1, "nilpiece: not-nilpotent: ", id="not-nilpotent"),
        pytest.param("truncated.json", 2, "nilpiece: bad-input: ", id="truncated"),
        pytest.param("wrong-rank.json", 2, "nilpiece: bad-input: ", id="wrong-rank"),
        pytest.param("both-matrices.json", 2, "nilpiece: bad-input: ", id="both-matrices"),
    ],
)
def test_classify_errors(test_data_path: Path, capsys, name, ret, diagnostic):
    path = test_data_path / name
    assert run(["nilpiece", "classify", "--input", str(path)]) == ret
    out, err = capsys.readouterr()
    assert out == ""
    assert err.startswith(diagnostic)


@pytest.mark.parametrize(
    "args",
    [
        pytest.param(["census", "--N", "0"], id="rank-zero"),
        pytest.param(["census", "--jobs", "0"], id="jobs-zero"),
        pytest.param(["census", "--k", "0"], id="degree-zero"),
        pytest.param(["census", "--csv", "--table"], id="csv-and-table"),
        pytest.param(["classify"], id="classify-without-input"),
        pytest.param(["classify", "--demo", "--input", "x.json"], id="demo-and-input"),
        pytest.param(["classify", "--input", "does-not-exist.json"], id="missing-input"),
        pytest.param(["verify-counts", "--q-list", "2,6"], id="q-list-not-prime-power"),
        pytest.param(["verify-counts", "--q-list", "2,x"], id="q-list-not-integer"),
        pytest.param(["verify-counts", "--q-list", "2,2"], id="q-list-repeated"),
        pytest.param(["verify-counts", "--n-max", "0"], id="n-max-zero"),
    ],
)
def test_usage_errors(capsys, args):
    assert run(["nilpiece", *args]) == 2
    out, err = capsys.readouterr()
    assert err.startswith("nilpiece: usage: ")


@pytest.mark.parametrize(
    "args, diagnostic",
    [
        pytest.param(["census", "--p", "3", "--N", "2"], "size-guard", id="census"),
        pytest.param(["census", "--p", "4"], "bad-construction", id="not-prime"),
        pytest.param(["census", "--p", "2", "--k", "9"], "size-guard", id="field-order"),
        pytest.param(["verify-prop2", "--p", "5"], "size-guard", id="group"),
    ],
)
def test_library_errors(capsys, args, diagnostic):
    assert run(["nilpiece", *args]) == 2
    out, err = capsys.readouterr()
    assert err.startswith(f"nilpiece: {diagnostic}: ")


def test_census(capsys):
    assert run(["nilpiece", "census", "--p", "2", "--N", "1", "--jobs", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["total"] == 4
    assert [(entry["label"], entry["count"]) for entry in doc["tally"]] == [
        ("0:3", 1),
        ("0:1,2:1", 3),
    ]
    assert all(check["passed"] for check in doc["checks"])
    assert "elapsed" not in doc


def test_census_csv(capsys):
    assert run(["nilpiece", "census", "--p", "3", "--csv"]) == 0
    assert capsys.readouterr().out == "profile,count\n0:3,1\n0:1,2:1,8\n"


def test_census_timing(capsys):
    assert run(["nilpiece", "census", "--timing"]) == 0
    assert "elapsed" in json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("p, k", [(2, 1), (3, 1), (2, 2)])
def test_verify_prop2(capsys, p, k):
    assert run(["nilpiece", "verify-prop2", "--p", str(p), "--k", str(k)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["command"] == "verify-prop2"
    assert doc["passed"]
    assert doc["mismatches"] == []


def test_verify_prop2_group_cache(tmp_path: Path, capsys):
    cache = tmp_path / "groups"
    args = ["nilpiece", "verify-prop2", "--group-cache", str(cache)]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert (cache / "isometries-2-1-1.json").exists()
    assert run(args) == 0
    assert capsys.readouterr().out == first


@pytest.mark.slow
def test_verify_prop2_dim5(capsys):
    assert run(["nilpiece", "verify-prop2", "--N", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["parameters"]["group_order"] == 720


@pytest.mark.parametrize("p", [2, 3])
def test_verify_bijection(capsys, p):
    assert run(["nilpiece", "verify-bijection", "--p", str(p)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"]
    assert doc["parameters"] == {"p": p, "k": 1, "q": p, "N": 1}


def test_verify_fibers(capsys):
    assert run(["nilpiece", "verify-fibers", "--N", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["passed"]


def test_verify_counts(capsys):
    assert run(["nilpiece", "verify-counts", "--n-max", "3", "--q-list", "2,3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"]
    assert doc["parameters"]["q_list"] == [2, 3]
    names = [check["name"] for check in doc["checks"]]
    assert names[0] == "S_1(N=1,q=2)"
    assert "master(N=3,q=3)" in names


def test_universality(capsys):
    assert run(["nilpiece", "universality"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"]
    assert doc["details"] == {"0:1,2:1": "q^2 - 1", "0:3": "1"}
    assert doc["parameters"]["q_list"] == [2, 3, 4, 5]


def test_selftest(capsys):
    assert run(["nilpiece", "selftest"]) == 0
    first = capsys.readouterr().out
    assert first.startswith("nilpiece selftest\n")
    assert "[FAIL]" not in first
    assert "[ok] equivariance: dim 3 over GF(2)" in first
    assert "[ok] |SO(3)| over GF(3)" in first
    assert run(["nilpiece", "selftest"]) == 0
    assert capsys.readouterr().out == first


def test_selftest_reports_broken_field(monkeypatch, capsys):
    # x^2 + 1 is reducible over GF(2)
    monkeypatch.setitem(DEFAULT_MODULI, (2, 2), (1, 0, 1))
    assert run(["nilpiece", "selftest"]) == 1
    out, err = capsys.readouterr()
    assert "[FAIL] field arithmetic: expected no error, got bad-construction: " in out


def test_help_lists_diagnostics(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["nilpiece", "--help"])
    assert exc.value.code == 0
    out, err = capsys.readouterr()
    assert "size-guard" in out
    assert "not-nilpotent" in out
