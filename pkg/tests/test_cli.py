"""Command-line interface: schemas, determinism, exit codes."""

import json

import pytest

from hepearcey.cli import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_det_gamma_zero_is_all_zero(capsys):
    code, out = run(
        ["det", "--gamma", "0", "--s-count", "3", "--s-start", "20", "--s-stop", "40"],
        capsys,
    )
    assert code == EXIT_OK
    rows = [l for l in out.splitlines() if l and not l.startswith("#") and not l[0].isalpha()]
    for row in rows:
        vals = row.split(",")
        assert all(float(v) == 0.0 for v in vals[1:])


def test_csv_and_json_contain_identical_numbers(tmp_path, capsys):
    common = [
        "counting",
        "--s-start", "20", "--s-stop", "30", "--s-count", "3",
        "--grid-m", "60",
    ]
    csv_path = tmp_path / "t.csv"
    json_path = tmp_path / "t.json"
    assert main(common + ["--format", "csv", "--out", str(csv_path)]) == EXIT_OK
    assert main(common + ["--format", "json", "--out", str(json_path)]) == EXIT_OK
    csv_rows = [
        l.split(",")
        for l in csv_path.read_text().splitlines()
        if l and not l.startswith("#")
    ]
    header, data = csv_rows[0], csv_rows[1:]
    j = json.loads(json_path.read_text())
    assert [list(r.values()) for r in j["rows"]] == data
    assert list(j["rows"][0].keys()) == header


def test_identical_config_is_byte_identical(tmp_path):
    args = [
        "det", "--s-start", "20", "--s-stop", "25", "--s-count", "2",
        "--grid-m", "60",
    ]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == EXIT_OK
    assert main(args + ["--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_usage_error_on_bad_gamma(capsys):
    code, _ = run(["det", "--gamma", "1.5"], capsys)
    assert code == EXIT_USAGE


def test_usage_error_on_unknown_criterion(capsys):
    code, _ = run(["verify", "--criterion", "nope"], capsys)
    assert code == EXIT_USAGE


def test_usage_error_on_unknown_subcommand(capsys):
    assert main(["frobnicate"]) == EXIT_USAGE


def test_kernel_diagonal_positive_and_oracle_close(tmp_path):
    out = tmp_path / "k.csv"
    args = [
        "kernel", "--s-start", "3", "--s-stop", "6", "--s-count", "2",
        "--gamma", "1.0", "--out", str(out),
    ]
    assert main(args) == EXIT_OK
    rows = [
        l.split(",")
        for l in out.read_text().splitlines()
        if l and not l.startswith("#") and not l.startswith("x")
    ]
    for x, y, k, o, diff in rows:
        if x == y:
            assert float(k) > 0.0
        assert float(diff) <= 1e-6


def test_verify_single_cheap_criterion(capsys):
    code, out = run(["verify", "--criterion", "3"], capsys)
    assert code == EXIT_OK
    assert "PASS criterion  3" in out
