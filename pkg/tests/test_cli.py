import json
import subprocess
import sys

import pytest

from cubicbraid.cli import main, parse_bytes


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_trace_eval_prints_value(capsys):
    code, out = _run(capsys, "trace", "eval", "--word", "2,-3,1,2,-3,1,2,1")
    assert code == 0
    # t(z3) is eliminated: -3u^2v - v^2 + 3u(1 + 6uv)
    assert out.out.strip() == "(3u+15u²v−v²)·t1"


def test_group_check(capsys):
    code, out = _run(capsys, "group", "check", "--n", "4")
    assert code == 0 and "648" in out.out


@pytest.mark.parametrize("argv,needle", [
    (["kdim", "--n", "3", "--ring", "f3"], "21"),
    (["kdim", "--n", "4", "--ring", "f3", "--restricted"], "249"),
    (["udim", "--n", "4"], "69"),
    (["hecke", "ternary", "--n", "4", "--route", "image"], "69"),
    (["reps", "small"], "True"),
])
def test_commands_pass(capsys, argv, needle):
    code, out = _run(capsys, *argv)
    assert code == 0, out.out
    assert needle in out.out


def test_json_report_is_deterministic(tmp_path, capsys):
    docs = []
    for k in range(2):
        p = tmp_path / f"r{k}.json"
        assert main(["verify", "--suite", "sec44", "--only", "sec44", "--json", str(p)]) == 0
        doc = json.loads(p.read_text())
        for rec in doc["records"]:
            rec.pop("wall_ms", None)
        docs.append(doc)
    capsys.readouterr()
    assert docs[0] == docs[1]
    assert docs[0]["suite"] == "sec44"
    assert all(rec["status"] == "PASS" for rec in docs[0]["records"])


def test_verify_extended_reports_resource_failures(capsys):
    code, out = _run(capsys, "verify", "--suite", "extended", "--only", "extended")
    assert code == 2
    assert "FAILED" in out.out and "FAIL " not in out.out


def test_bad_inputs(capsys):
    with pytest.raises(SystemExit) as e:
        main(["kdim", "--n", "4", "--mem-cap", "1M"])
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        main(["hecke", "dims", "--n", "4", "--route", "nope"])
    code, out = _run(capsys, "hecke", "ternary", "--n", "9")
    assert code == 2 and "error" in out.err


def test_parse_bytes():
    assert parse_bytes("2G") == 2 * 2 ** 30
    assert parse_bytes("512m") == 512 * 2 ** 20
    assert parse_bytes("100MB") == 100 * 2 ** 20


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cubicbraid", "trace", "eval", "--word", "1,1"],
                         capture_output=True, text=True, timeout=300)
    assert res.returncode == 0 and res.stdout.strip() == "(v)·t1"
