import json

import pytest

from gcsa import corpus
from gcsa.cli import main
from gcsa.io import dumps_model


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv,row", [
    (("four-plane", "--scheme", "homogeneous"), (16, 11, 5, True)),
    (("four-plane", "--scheme", "point-normal"), (24, 13, 6, False)),
    (("two-line",), (12, 5, 6, False)),
])
def test_analyze_table_rows(capsys, argv, row):
    code, out, _ = run(capsys, "analyze", *argv, "--json")
    d = json.loads(out)
    assert (d["column_size"], d["rank"], d["dor"], d["matched"]) == row
    assert code == (0 if row[3] else 3)


def test_analyze_text_table(capsys):
    code, out, _ = run(capsys, "analyze", "four-plane")
    assert code == 0
    assert "Without DOR" in out and "With DOR" in out
    assert "four-plane-rep1  16" in out and "✓" in out


def test_analyze_linear_exit_code(capsys):
    code, out, _ = run(capsys, "analyze", "eq6")
    assert code == 2 and "Inconsistent Over" in out
    code, _, _ = run(capsys, "analyze", "identity3")
    assert code == 0


def test_analyze_perturbed_is_deterministic(capsys):
    _, a, _ = run(capsys, "analyze", "crank", "--perturb", "--seed", "4", "--json")
    _, b, _ = run(capsys, "analyze", "crank", "--perturb", "--seed", "4", "--json")
    assert a == b and json.loads(a)["rank"] == 22


def test_detect_over_greedy(capsys):
    code, out, _ = run(capsys, "detect-over", "eq6", "--mode", "greedy", "--seed-row", "E1")
    assert code == 0
    assert json.loads(out.splitlines()[0]) == [["E1", "E2", "E3", "E4"], ["E1", "E2", "E3", "E5"]]


def test_detect_over_exact_summary(capsys):
    _, out, _ = run(capsys, "detect-over", "eq6", "--mode", "exact")
    lines = out.splitlines()
    assert ["E4", "E5"] in json.loads(lines[0])
    assert lines[1] == "greedy minimum 4 > exact minimum 2"


def test_detect_over_identity_empty(capsys):
    _, out, _ = run(capsys, "detect-over", "identity3", "--mode", "exact", "--json")
    assert json.loads(out)["groups"] == []


def test_detect_over_unknown_row(capsys):
    code, _, err = run(capsys, "detect-over", "eq6", "--seed-row", "E9")
    assert code == 1 and "unknown seed row" in err


def test_detect_wc(capsys):
    _, out, _ = run(capsys, "detect-wc", "crank", "--mode", "greedy", "--seed-order", "F3,F7,F2")
    greedy = json.loads(out)
    _, out, _ = run(capsys, "detect-wc", "crank", "--mode", "exact")
    exact = json.loads(out)
    assert len(exact["parts"][0]) > len(greedy["parts"][0])


def test_check_jacobian(capsys):
    code, out, _ = run(capsys, "check-jacobian", "crank", "--trials", "20", "--json")
    d = json.loads(out)
    assert code == 0 and d["max_relative_error"] < 1e-6
    code, out, _ = run(capsys, "check-jacobian", "eq6", "--json")
    assert code == 0 and json.loads(out)["max_relative_error"] < 1e-12


def test_check_jacobian_zero_step(capsys):
    code, _, err = run(capsys, "check-jacobian", "crank", "--h", "0")
    assert code == 1 and "--h" in err


def test_demo_verify(capsys):
    code, out, _ = run(capsys, "demo", "--verify")
    assert code == 0
    assert out.count("PASS") == len(corpus.NAMES)
    assert "all corpus entries verified" in out


def test_model_file_and_errors(capsys, tmp_path):
    path = tmp_path / "lines.json"
    path.write_text(dumps_model(corpus.load("two-line")))
    code, out, _ = run(capsys, "analyze", str(path), "--json")
    assert code == 3 and json.loads(out)["rank"] == 5
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 1 and "bad.json" in err
    code, _, err = run(capsys, "analyze", "no-such-model")
    assert code == 1 and "unknown corpus entry" in err
