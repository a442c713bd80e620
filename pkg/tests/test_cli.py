import json

import pytest

from unsieved.cli import main


@pytest.fixture
def kernel_file(tmp_path):
    path = tmp_path / "kernel.txt"
    path.write_text("1 0\n1.5 1\n")
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_rho_text(capsys):
    code, out = run(capsys, ["rho", "1.0", "2.0"])
    assert code == 0
    assert "rho(1) = 1.000000" in out
    assert "rho(2) = 0.306853" in out


def test_rho_json(capsys):
    code, out = run(capsys, ["--format", "json", "rho", "6.0"])
    assert code == 0
    rows = json.loads(out)
    assert 1.5e-5 <= rows[0]["rho"] <= 2.5e-5


def test_rho_out_of_range_exit_code(capsys):
    assert main(["rho", "3.0", "--w-max", "2.0"]) == 2


def test_sigma_text(capsys, kernel_file):
    code, out = run(capsys, ["sigma", "3", "--kernel", kernel_file])
    assert code == 0
    assert "sigma(3)   = 0.676736" in out
    assert "E(3)       = 1.500000" in out
    assert "e^gamma/E(u)" in out


def test_sigma_identity(capsys, tmp_path):
    path = tmp_path / "ident.txt"
    path.write_text("1 1\n")
    code, out = run(capsys, ["sigma", "5", "--kernel", str(path)])
    assert code == 0
    assert "sigma(5)   = 1.000000" in out


def test_sigma_bad_kernel_exit_2(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1 1.5\n")
    assert main(["sigma", "2", "--kernel", str(path)]) == 2
    assert main(["sigma", "2", "--kernel", str(tmp_path / "nope")]) == 2


def test_sigma_u_beyond_umax_exit_2(kernel_file):
    assert main(["sigma", "6", "--kernel", kernel_file, "--u-max", "4"]) == 2


def test_table_default_byte_stable(capsys):
    code1, out1 = run(capsys, ["table"])
    code2, out2 = run(capsys, ["table"])
    assert code1 == code2 == 0
    assert out1 == out2
    lines = out1.strip().split("\n")
    assert len(lines) == 7   # header + six w values
    first = lines[1].split(",")
    assert first[0] == "1.500000"
    assert abs(float(first[1]) - 0.676735) < 2e-6


def test_table_single_row_trivial(capsys):
    code, out = run(capsys, ["table", "--w-min", "1", "--w-max", "1"])
    assert code == 0
    row = out.strip().split("\n")[1].split(",")
    assert float(row[1]) == pytest.approx(1.0, abs=1e-9)
    assert float(row[2]) == pytest.approx(1.0, abs=1e-9)


def test_bounds_csv(capsys):
    code, out = run(capsys, ["--format", "csv", "bounds", "2.0"])
    assert code == 0
    assert out.startswith("w,lower")


def test_verify_trivial(capsys, tmp_path):
    path = tmp_path / "one.txt"
    path.write_text("table\n")
    code, out = run(capsys, ["verify", "100", "2",
                             "--spec", str(path)])
    assert code == 0
    assert "PASS" in out


def test_verify_resource_exit_3(tmp_path):
    path = tmp_path / "sm.txt"
    path.write_text("smooth 1000\n")
    assert main(["verify", "1000", "2", "--spec", str(path),
                 "--x-cap", "1000"]) == 3


def test_verify_bad_spec_exit_2(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("table\n2 5 1.5\n")
    assert main(["verify", "100", "2", "--spec", str(path)]) == 2


def test_properties_small_corpus(capsys):
    code, out = run(capsys, ["properties", "--count", "2"])
    assert code == 0
    summary = json.loads(out)
    assert summary["n_violations"] == 0
    assert summary["count"] == 2


def test_properties_empty_corpus_warns(capsys):
    code, out = run(capsys, ["properties", "--count", "0"])
    assert code == 0
    summary = json.loads(out)
    assert summary["warning"].startswith("empty corpus")


def test_unknown_command_exit_2():
    assert main(["frobnicate"]) == 2
