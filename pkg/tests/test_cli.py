import json
from pathlib import Path

import pytest

from ellfgl.cli import RunConfig, main, reference_rho, run

FIXTURES = Path(__file__).parent / "fixtures"


def report(argv):
    code, text = run(argv)
    return code, json.loads(text)


def test_assoc_tate():
    code, obj = report(["assoc", "--family", "tate", "--order", "7"])
    assert code == 0 and obj["ok"] and obj["report"]["defect"] == 0


def test_assoc_text_format():
    code, text = run(["assoc", "--family", "tate", "--order", "5", "--format", "text"])
    assert code == 0
    line = next(l for l in text.splitlines() if l.startswith("report.defect"))
    assert line.split() == ["report.defect", "0"]


def test_rho_table_rb():
    code, obj = report(["rho-table", "--ring", "RB", "--max-n", "14"])
    assert code == 0
    got = [row["rho"] for row in obj["report"]["table"]]
    assert got == ["inf"] * 4 + [5, 2, 7, 2, 3, 1, 11, 1, 13, 2]


def test_rho_table_corrupted_fixture():
    code, obj = report(["rho-table", "--ring", "RB", "--max-n", "14", "--fixture", str(FIXTURES / "corrupted_rb.json")])
    assert code == 1
    assert obj["failure"].startswith("rho(5)")


def test_usage_errors(capsys):
    assert run(["nope"])[0] == 2
    assert run(["assoc", "--order", "1"])[0] == 2
    assert run(["level-verify"])[0] == 2
    assert run(["rho-table", "--ring", "RB", "--fixture", "/nonexistent.json"])[0] == 2
    assert main(["assoc", "--N", "9"]) == 2
    assert "usage" in capsys.readouterr().err


def test_guard_exit_code():
    assert run(["graded", "--ring", "RB", "--W", "6", "--weight", "6", "--guard", "2"])[0] == 3


def test_verification_failure_exit():
    code, obj = report(["level-verify", "--N", "3", "--order", "8"])
    assert code == 1 and "Tate vs Buchstaber" in obj["failure"]
    code, _ = report(["level-verify", "--N", "3", "--order", "8", "--variant", "corrected"])
    assert code == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["expand", "--family", "buchstaber", "--order", "5"],
        ["log-exp", "--family", "tate", "--order", "6"],
        ["tate-s", "--order", "8"],
        ["tate-exp-check", "--order", "8"],
        ["solve-level", "--N", "4", "--order", "6"],
        ["torsion", "--ring", "R4", "--W", "3"],
        ["krichever-fit", "--family", "level2", "--order", "10"],
        ["hfe", "--family", "level2", "--n", "2", "--order", "6"],
        ["cpn", "--family", "tate", "--order", "8"],
    ],
)
def test_commands_pass(argv):
    code, text = run(argv)
    assert code == 0, text


def test_hfe_negative():
    assert run(["hfe", "--family", "level2", "--n", "3", "--order", "4"])[0] == 1


def test_byte_identical(tmp_path):
    out = tmp_path / "r.json"
    a = run(["rho-table", "--ring", "R2", "--max-n", "8", "--out", str(out)])[1]
    b = run(["rho-table", "--ring", "R2", "--max-n", "8", "--seedless"])[1]
    assert a == b == out.read_text()


def test_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"order": 5, "family": "buchstaber"}))
    code, obj = report(["expand", "--config", str(cfg)])
    assert code == 0 and obj["report"]["order"] == 5
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(["expand", "--config", str(cfg)])[0] == 2


def test_reference_tables():
    assert [reference_rho("R2", n) for n in (2, 4, 8, 3)] == ["inf", "inf", 2, 1]
    assert [reference_rho("R4", n) for n in (3, 4, 8, 5, 6)] == [4, 8, 2, 1, 2]
    assert reference_rho("RB_mod_JN", 3, 2) == 1
    assert reference_rho("RB_mod_JN", 4, 3) == 1
    assert RunConfig().order == 10 and RunConfig().W == 10
