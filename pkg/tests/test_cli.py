import json
import subprocess
import sys
from fractions import Fraction

import pytest

from eisbasis.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def first_rational(cyc):
    return Fraction(cyc["coeffs"][0])


def test_basis_gamma0_11(capsys):
    rc, out, _ = run(capsys, "basis", "gamma0:11", "--weight", "2", "--trunc", "10")
    assert rc == 0
    data = json.loads(out)
    assert data["dimension"] == 1
    assert data["elements"][0]["holomorphic"] is True


def test_qexp_level_one(capsys):
    rc, out, _ = run(capsys, "qexp", "gamma:1", "--weight", "4", "--label", "G:0,0", "--trunc", "10")
    assert rc == 0
    cs = [first_rational(c) for c in json.loads(out)["qexp"]["coeffs"]]
    assert len(cs) == 11
    sigma3 = [sum(d ** 3 for d in range(1, n + 1) if n % d == 0) for n in range(1, 11)]
    assert [c / cs[0] for c in cs] == [1] + [240 * s for s in sigma3]


def test_hecke_example(capsys):
    rc, out, _ = run(capsys, "hecke", "gamma0:12", "--weight", "4", "--p", "5",
                     "--label", "E0:0,1", "--verify", "--trunc", "6")
    assert rc == 0
    data = json.loads(out)
    assert data["image"] == [{"coeff": "126", "label": "E0:0,1"}] or \
        [(t["label"], str(t["coeff"])) for t in data["image"]] == [("E0:0,1", "126")]
    assert data["verified"] is True


def test_hecke_diamond(capsys):
    rc, out, _ = run(capsys, "hecke", "gamma1:5", "--weight", "3", "--d", "2",
                     "--label", "E1:0,1", "--format", "text")
    assert rc == 0 and "E1:0,2" in out


def test_neben_and_chars(capsys):
    rc, out, _ = run(capsys, "neben", "--level", "5", "--list-chars")
    assert rc == 0 and len(json.loads(out)["characters"]) == 4
    rc, out, _ = run(capsys, "neben", "--level", "5", "--char", "1", "--weight", "3", "--trunc", "4")
    data = json.loads(out)
    assert rc == 0 and data["dimension"] == 2
    assert data["character"]["values"]["2"] == "1/4"


def test_cusps_orbits_text(capsys):
    rc, out, _ = run(capsys, "cusps", "gamma1:4", "--format", "text")
    assert rc == 0 and "irregular" in out
    rc, out, _ = run(capsys, "orbits", "gamma0:6")
    assert rc == 0 and len(json.loads(out)["orbits"]) == 4


def test_selfcheck_small(capsys):
    rc, out, _ = run(capsys, "selfcheck", "--levels", "1..3", "--format", "text")
    assert rc == 0
    assert out.count("PASS") >= 10 and "FAIL" not in out


@pytest.mark.parametrize("argv", [
    ["basis", "gamma0:11"],                      # missing --weight
    ["basis", "bogus:3", "--weight", "2"],
    ["qexp", "gamma:1", "--weight", "4", "--label", "G:0"],
    ["hecke", "gamma0:12", "--weight", "4", "--label", "E0:0,1"],
    ["selfcheck", "--levels", "5..2"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    rc, out, err = run(capsys, *argv)
    assert rc == 1
    assert out == "" and len(err.strip().splitlines()) == 1


@pytest.mark.parametrize("argv", [
    ["hecke", "gamma0:12", "--weight", "4", "--p", "3", "--label", "E0:0,1"],
    ["neben", "--level", "5", "--char", "0", "--weight", "2"],
    ["basis", "gamma:1", "--weight", "1"],
])
def test_domain_errors(capsys, argv):
    rc, out, err = run(capsys, *argv)
    assert rc == 2
    assert out == "" and err.strip()


def test_out_file_and_determinism(tmp_path):
    paths = [tmp_path / f"o{i}.json" for i in range(2)]
    for p in paths:
        subprocess.run([sys.executable, "-m", "eisbasis", "basis", "gamma1:7", "--weight", "3",
                        "--trunc", "20", "--out", str(p)], check=True)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert json.loads(paths[0].read_text())["dimension"] == 6
