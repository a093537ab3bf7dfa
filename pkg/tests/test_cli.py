import json

import pytest

from truncperiods.builtins import section6_f
from truncperiods.cli import main
from truncperiods.laurent import to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_hw_example_1d(capsys):
    code, out, _ = run(capsys, "hw", "--builtin", "example-1d", "--m", "3", "--mu", "interior")
    assert code == 0
    assert "[1 + 2*t^2]" in out


def test_hw_legendre(capsys):
    code, out, _ = run(capsys, "hw", "--builtin", "legendre", "--m", "3")
    assert code == 0 and "[2 + 2*z]" in out


def test_hw_missing_m(capsys):
    code, _, err = run(capsys, "hw", "--builtin", "legendre")
    assert code == 2 and "--m" in err


def test_hw_from_file(tmp_path, capsys):
    path = tmp_path / "f.json"
    path.write_text(json.dumps(to_json(section6_f())))
    code, out, _ = run(capsys, "hw", "--input", str(path), "--m", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["gamma"]["entries"] == [["v5"]]


def test_bad_json_file(tmp_path, capsys):
    path = tmp_path / "f.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "hw", "--input", str(path), "--m", "2")
    assert code == 2 and "JSON" in err


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "nonsense"])
    assert info.value.code == 2


def test_ct_seq(capsys):
    code, out, _ = run(capsys, "ct-seq", "--builtin", "example-1d", "--T", "5")
    assert code == 0 and "1, 0, 2, 0, 6" in out


def test_verify_mev(capsys):
    code, out, _ = run(capsys, "verify", "mev", "--builtin", "dwork-quartic", "--p", "5",
                       "--s", "2", "--T", "60")
    assert code == 0 and "holds" in out and "t^60" in out


def test_verify_main5(capsys):
    code, out, _ = run(capsys, "verify", "main5", "--builtin", "section6", "--p", "3",
                       "--smax", "1", "--M", "9", "--mu", "interior")
    assert code == 0 and "weight <= 3" in out


NEGATIVE = [
    ("verify", "mev", "--builtin", "example-1d", "--p", "3", "--s", "2", "--perturb", "4"),
    ("verify", "mev", "--builtin", "legendre", "--p", "3", "--s", "2", "--perturb", "5"),
    ("verify", "any-m", "--builtin", "dwork-quartic", "--p", "5", "--m", "10", "--T", "60",
     "--perturb", "7"),
    ("verify", "deriv", "--builtin", "example-1d", "--p", "3", "--s", "2", "--perturb", "2"),
    ("verify", "limits", "--builtin", "example-1d", "--p", "3", "--smax", "3", "--T", "10",
     "--perturb", "2,0,0,3"),
    ("verify", "main5", "--builtin", "section6", "--p", "3", "--smax", "1", "--M", "9",
     "--perturb", "4,4,0,1,1,-2,0"),
]


@pytest.mark.parametrize("argv", NEGATIVE, ids=[a[1] + "-" + a[3] for a in NEGATIVE])
def test_negative_controls_exit_one(argv, capsys):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 1
    report = json.loads(out)
    assert report["verdict"] == "fails" and report["failure"]
    clean = [a for a in argv]
    i = clean.index("--perturb")
    del clean[i:i + 2]
    assert run(capsys, *clean)[0] == 0


def test_unit_root(capsys):
    code, out, _ = run(capsys, "unit-root", "--p", "5", "--z0", "2", "--s", "2")
    assert code == 0 and "lambda = 13 mod 5^2" in out and "agreement: yes" in out
    code, out, _ = run(capsys, "unit-root", "--p", "5", "--z0", "2", "--s", "1")
    assert "lambda = 3 mod 5^1" in out
    code, _, err = run(capsys, "unit-root", "--p", "5", "--z0", "1", "--s", "1")
    assert code == 2 and "singular" in err


def test_ahyp_commands(capsys):
    code, out, _ = run(capsys, "ahyp", "kernel", "--builtin", "section6")
    assert code == 0 and "pointed" in out
    code, out, _ = run(capsys, "ahyp", "psi", "--builtin", "section6", "--m", "5", "--oracle")
    assert code == 0 and "oracle agrees: yes" in out
    code, out, _ = run(capsys, "ahyp", "period", "--builtin", "section6", "--u", "1,1",
                       "--k", "1", "--i", "5", "--M", "3")
    assert code == 0 and "2 * v^[1, 0, 0, 1, -3]" in out


def test_ahyp_config_file(tmp_path, capsys):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"exponents": [[0, 2], [1, 0], [3, 0], [2, 0], [1, 1]],
                                "mu": [5]}))
    code, out, _ = run(capsys, "ahyp", "psi", "--input", str(path), "--m", "4")
    assert code == 0 and out.splitlines()[0].startswith("columns [5]")


def test_json_round_trip_and_determinism(capsys, tmp_path):
    argv = ["verify", "main5", "--builtin", "section6", "--p", "3", "--smax", "1", "--M", "9",
            "--format", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    a, b = json.loads(first), json.loads(second)
    a.pop("elapsed"), b.pop("elapsed")
    assert a == b
    assert json.loads(json.dumps(a)) == a


def test_output_file(tmp_path, capsys):
    out = tmp_path / "r.txt"
    code, stdout, _ = run(capsys, "ct-seq", "--builtin", "example-1d", "--T", "3",
                          "--output", str(out))
    assert code == 0 and stdout == ""
    assert "1, 0, 2" in out.read_text()
