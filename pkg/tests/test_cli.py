import json

import pytest

from fqdirections import cli, harness


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_directions(capsys):
    code, out, err = run(capsys, "directions", "--p", "3", "--ext", "2", "--set", "0,1")
    assert code == 0
    row = json.loads(out)
    assert row["directions"] == ["0", "1", "2"] and row["num_directions"] == 3
    assert "|D(A)| = 3" in err


def test_directions_is_byte_stable(capsys):
    args = ("directions", "--p", "5", "--set", "0,1,1+1w,3w")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_redei_single_slope(capsys):
    code, out, err = run(capsys, "redei", "--p", "3", "--ext", "2", "--set", "0,1", "--slope", "1")
    assert code == 0
    row = json.loads(out)
    assert row["R_pretty"] == "X^4 + 2X^2" and row["H_pretty"] == "2X^3"
    assert (row["s"], row["t"], row["f"], row["deg_Q"]) == (1, 3, "0 2", 5)


def test_redei_csv(capsys):
    code, out, _ = run(capsys, "redei", "--p", "3", "--set", "0,1,2", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("y,R,H,Q,s,t,f") and len(lines) == 4


def test_set_from_file(capsys, tmp_path):
    path = tmp_path / "A.txt"
    path.write_text("0\n1\n1+1w\n")
    code, out, _ = run(capsys, "directions", "--p", "3", "--set", f"@{path}")
    assert code == 0 and json.loads(out)["A"] == ["0", "1", "1+1w"]


def test_scan_products_to_file(capsys, tmp_path):
    out_path = tmp_path / "scan.jsonl"
    code, out, err = run(capsys, "scan-products", "--p", "3", "--size-max", "3", "--out", str(out_path))
    assert code == 0 and out == ""
    lines = out_path.read_text().splitlines()
    assert len(lines) == 120
    assert json.loads(err)["records"] == 120


def test_scan_pointsets_csv(capsys):
    code, out, err = run(
        capsys, "scan-pointsets", "--p", "3", "--mode", "sample", "--samples", "30", "--size-max", "9", "--format", "csv"
    )
    assert code == 0 and len(out.splitlines()) == 31


def test_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(harness, "product_directions_naive", lambda ctx, A: frozenset())
    code, _, err = run(capsys, "scan-products", "--p", "3", "--size-max", "2", "--oracle-rate", "1")
    assert code == 1
    summary = json.loads(err)
    assert summary["failed"] and summary["first_failure"]["checker"] == "oracle"


@pytest.mark.parametrize(
    "argv",
    [
        ["directions", "--p", "4", "--set", "0,1"],
        ["directions", "--p", "3", "--set", "0"],
        ["directions", "--p", "3", "--set", "0,x"],
        ["redei", "--p", "3", "--set", "0,1", "--slope", "1+1w"],
        ["scan-products", "--p", "3", "--size-min", "1"],
        ["scan-products", "--p", "3", "--size-max", "9", "--cap", "10"],
        ["verify-lemmas", "--p", "3", "--samples", "0"],
        ["min-directions", "--p", "3", "--size", "1"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["directions", "--p", "3", "--format", "xml", "--set", "0,1"])
    assert exc.value.code == 2


@pytest.mark.parametrize("cmd", list(cli.COMMANDS))
def test_help(capsys, cmd):
    with pytest.raises(SystemExit) as exc:
        cli.main([cmd, "--help"])
    assert exc.value.code == 0
    assert "--p" in capsys.readouterr().out


def test_verify_lemmas_q9(capsys):
    code, out, err = run(capsys, "verify-lemmas", "--p", "3", "--seed", "42")
    assert code == 0
    report = json.loads(out)
    assert report["subfield_criterion"]["hypothesis_count"] > 0


def test_min_directions(capsys):
    code, out, _ = run(capsys, "min-directions", "--p", "3", "--size", "3")
    assert code == 0 and json.loads(out)["coset"]["min"] == 3
