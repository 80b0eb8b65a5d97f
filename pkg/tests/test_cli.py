import csv
import io
import json
import subprocess
import sys

import pytest

from qsu2.cli import CSV_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_eval_q_integer_spin(capsys):
    code, out, _ = run(capsys, "eval", "--fn", "Q", "--J", "1", "--q", "real:2", "--eta", "1")
    assert code == 0
    (row,) = rows(out)
    assert float(row["re"]) == pytest.approx(0.8, rel=1e-15) and float(row["im"]) == 0


def test_eval_p_trivial(capsys):
    code, out, _ = run(capsys, "eval", "--fn", "P", "--J", "0", "--M", "0", "--N", "0",
                       "--q", "real:2", "--xi", "0.5")
    assert code == 0 and float(rows(out)[0]["re"]) == 1.0


def test_eval_l_is_imaginary(capsys):
    code, out, _ = run(capsys, "eval", "--fn", "L", "--q", "circle:0.4", "--eta", "1")
    row = rows(out)[0]
    assert code == 0 and abs(float(row["re"])) < 1e-12
    # mpmath oracle (scripts/oracle_values.py)
    assert float(row["im"]) == pytest.approx(-1.0447504584468082, abs=1e-10)


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "--fn", "PSI", "--J", "1/2", "--q", "circle:0.3",
                       "--theta", "1.0471975511965976", "--phi", "0", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == "1.0" and doc["command"] == "eval"
    (row,) = doc["rows"]
    # mpmath oracle (scripts/oracle_values.py)
    assert complex(row["re"], row["im"]) == pytest.approx(0.47744438083150763 + 0.063258340874008169j, abs=1e-9)


def test_negative_spin_flags(capsys):
    code, out, _ = run(capsys, "eval", "--fn", "Q", "--J", "1/2", "--N", "-1/2", "--q", "real:2", "--eta", "1")
    assert code == 0 and rows(out)[0]["N"] == "-1/2"


def test_table_shape_and_determinism(capsys):
    argv = ("table", "--fn", "P", "--J", "1", "--q", "real:2")
    code, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert code == 0 and first == second
    lines = first.split("\r\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(rows(first)) == 11


def test_table_classical(capsys):
    code, out, _ = run(capsys, "table", "--fn", "P", "--J", "1", "--q", "real:2", "--classical", "--points", "3")
    assert code == 0
    table = rows(out)
    assert len(table) == 3 and "classical_re" in table[0]
    # classical P^1_00 is the Legendre polynomial xi
    for row in table:
        assert float(row["classical_re"]) == pytest.approx(float(row["xi"]), abs=1e-14)


def test_table_to_file(tmp_path, capsys):
    path = tmp_path / "t.csv"
    code, out, _ = run(capsys, "table", "--fn", "Q", "--J", "1", "--q", "real:2", "--out", str(path))
    assert code == 0 and len(rows(path.read_text())) == 11


@pytest.mark.parametrize("argv", [
    ("eval", "--fn", "Q", "--J", "1", "--q", "bogus", "--eta", "1"),
    ("eval", "--fn", "Q", "--J", "1/3", "--q", "real:2", "--eta", "1"),
    ("eval", "--fn", "X", "--q", "real:2", "--eta", "1"),
    ("verify", "--suite", "nope", "--q", "real:2"),
])
def test_parse_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_classical_only_for_p(capsys):
    code, _, err = run(capsys, "table", "--fn", "Q", "--J", "1", "--q", "real:2", "--classical")
    assert code == 2 and err


def test_help_exits_0(capsys):
    assert run(capsys, "--help")[0] == 0


def test_domain_error_exit_3(capsys):
    code, out, err = run(capsys, "eval", "--fn", "P", "--J", "1", "--q", "real:2", "--xi", "1.5")
    assert code == 3 and "domain" in err and out == ""


def test_io_error_exit_4(capsys):
    code, _, err = run(capsys, "table", "--fn", "P", "--J", "1", "--q", "real:2", "--out", "/nonexistent/dir/t.csv")
    assert code == 4 and err


def test_verify_report(capsys):
    code, out, err = run(capsys, "verify", "--suite", "lemma1", "--q", "circle:0.3", "--taus", "0.2")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["suite"] == "lemma1"
    assert set(doc) == {"schema_version", "command", "suite", "flags", "passed",
                        "n_checks", "n_failed", "n_skipped", "checks"}
    assert doc["n_checks"] == len(doc["checks"]) > 0
    for check in doc["checks"]:
        assert set(check) == {"name", "anchor", "residual", "tolerance", "passed", "skipped", "reason"}
    assert "passed" in err


def test_verify_ortho_real(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "ortho", "--Jmax", "5/2", "--N", "1/2", "--M", "1/2",
                       "--q", "real:2")
    doc = json.loads(out)
    assert code == 0 and doc["n_failed"] == 0


def test_verify_skips_outside_circle_domain(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "--suite", "ortho", "--Jmax", "5/2", "--N", "1/2", "--M", "1/2",
                     "--q", "circle:0.6", "--out", str(path))
    doc = json.loads(path.read_text())
    skipped = [c for c in doc["checks"] if c["skipped"]]
    assert code == 0 and doc["n_skipped"] == len(skipped) > 0
    assert all(c["reason"] for c in skipped)


def test_limits(capsys):
    code, out, _ = run(capsys, "limits", "--J", "1", "--points", "5", "--eps", "1e-2", "1e-3")
    table = rows(out)
    assert code == 0 and len(table) == 4
    # deviation from the classical functions is first order in eps
    for row in table:
        assert 0.5 < float(row["ratio_to_eps"]) < 5


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qsu2", "eval", "--fn", "Q", "--J", "1", "--q", "real:2",
                           "--eta", "1"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "0.8" in proc.stdout
