import csv
import io
import json
import subprocess
import sys

import pytest

from psthue import cli


def run_cli(capsysbinary, *argv):
    code = cli.main(list(argv))
    out = capsysbinary.readouterr()
    return code, out.out.decode(), out.err.decode()


def test_seq_json(capsysbinary):
    code, out, _ = run_cli(capsysbinary, "seq", "--c", "7/5", "--count", "8")
    assert code == 0
    rep = json.loads(out)
    assert list(rep) == ["command", "config", "version", "wall_time_s", "results"]
    assert rep["results"]["floors"] == [0, 1, 2, 4, 6, 9, 12, 15]
    assert rep["results"]["values"] == [0, 1, 1, 1, 0, 0, 0, 0]
    assert rep["config"]["c"] == "7/5"


def test_csv_crlf_and_header(capsysbinary):
    code, out, _ = run_cli(capsysbinary, "blocks", "--c", "7/5", "--L", "2", "--N", "1e4", "--format", "csv")
    assert code == 0
    assert out.endswith("\r\n") and "\n" not in out.replace("\r\n", "")
    rows = list(csv.DictReader(io.StringIO(out, newline="")))
    assert [r["word"] for r in rows] == ["00", "01", "10", "11"]
    assert sum(int(r["count"]) for r in rows) == 10**4


def test_float_precision_round_trip(capsysbinary):
    _, out, _ = run_cli(capsysbinary, "discrepancy", "--alpha", "sqrt(2)", "--N", "100")
    v = json.loads(out)["results"]["discrepancy"]
    assert isinstance(v, float)
    assert float(format(v, ".17g")) == v


def test_exact_discrepancy_as_fraction(capsysbinary):
    _, out, _ = run_cli(capsysbinary, "discrepancy", "--alpha", "1/3", "--N", "3")
    assert json.loads(out)["results"]["exact"] == "1/3"


def test_output_file(tmp_path, capsysbinary):
    path = tmp_path / "r.json"
    code, out, _ = run_cli(capsysbinary, "farey", "--order", "5", "--output", str(path))
    assert code == 0 and out == ""
    rep = json.loads(path.read_text())
    assert rep["command"] == "farey"


def strip_time(text):
    rep = json.loads(text)
    rep.pop("wall_time_s")
    rep["config"].pop("threads")
    return rep


def test_deterministic_across_threads(capsysbinary):
    _, a, _ = run_cli(capsysbinary, "bv-ap", "--x", "2000", "--threads", "1")
    _, b, _ = run_cli(capsysbinary, "bv-ap", "--x", "2000", "--threads", "2")
    assert strip_time(a) == strip_time(b)
    _, c, _ = run_cli(capsysbinary, "s1", "--N", "32", "--seed", "4")
    _, d, _ = run_cli(capsysbinary, "s1", "--N", "32", "--seed", "4")
    assert strip_time(c) == strip_time(d)


def test_threads_env(monkeypatch, capsysbinary):
    monkeypatch.setenv("PSTHUE_THREADS", "3")
    _, out, _ = run_cli(capsysbinary, "seq", "--c", "7/5", "--count", "2")
    assert json.loads(out)["config"]["threads"] == 3


def test_config_error(capsysbinary):
    code, _, err = run_cli(capsysbinary, "discrepancy", "--N", "10")
    assert code == 2 and "invalid configuration" in err


def test_argparse_error_exit_two(capsysbinary):
    with pytest.raises(SystemExit) as exc:
        cli.main(["seq", "--c", "2"])
    assert exc.value.code == 2


def test_budget_exit_three(capsysbinary):
    code, _, err = run_cli(capsysbinary, "s1", "--N", "100000", "--D", "1000")
    assert code == 3 and "budget" in err


def test_precision_exit_four(capsysbinary):
    # sqrt(9/4) is 3/2 but not recognised as rational, and 4**(3/2) is an integer
    code, _, err = run_cli(capsysbinary, "seq", "--c", "sqrt(9/4)", "--start", "4", "--count", "1")
    assert code == 4 and "precision" in err


@pytest.mark.parametrize("argv", [
    ["normality", "--c", "7/5", "--L", "2", "--checkpoints", "1e3,1e4"],
    ["fourier-check", "--count", "5"],
    ["census-good", "--lam", "12", "--r", "64", "--m", "3"],
    ["discrepancy", "--mu", "4", "--N", "32", "--m", "3"],
    ["farey", "--alpha", "sqrt(2)", "--mu", "1", "--sigma", "5"],
    ["bv-beatty", "--x", "500", "--grid", "4", "--beta-samples", "2"],
    ["s1", "--N", "12", "--D", "6", "--exact"],
    ["s1", "--N", "16", "--beatty-grid", "2", "--beta-samples", "2"],
    ["lemmas", "--suite", "vdc,correlation_fourier"],
])
def test_commands_run(capsysbinary, argv):
    for fmt in ("json", "csv"):
        code, out, err = run_cli(capsysbinary, *argv, "--format", fmt)
        assert code == 0, err
        if fmt == "json":
            assert json.loads(out)["command"] == argv[0]
        else:
            assert len(list(csv.reader(io.StringIO(out, newline="")))) >= 2


def test_census_command_matches_formula(capsysbinary):
    _, out, _ = run_cli(capsysbinary, "census-good", "--lam", "12", "--r", "64", "--m", "3", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out, newline="")))
    assert all(r["match"] == "True" for r in rows)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "psthue", "seq", "--c", "3/2", "--count", "5"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["results"]["floors"] == [0, 1, 2, 5, 8]
