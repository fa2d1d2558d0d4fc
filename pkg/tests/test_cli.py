import json
import subprocess
import sys

import pytest

from pmalg.algebra import is_isomorphic
from pmalg.cli import main
from pmalg.constructions import build_si
from pmalg.io import dump_algebra, load_algebra, loads_algebra


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, (i, m) in {"b22": (2, 2), "chain4": (1, 2), "chain5": (1, 3), "two": (1, 0)}.items():
        p = tmp_path / f"{name}.alg"
        dump_algebra(build_si(i, m), p)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_b22(capsys, files):
    code, out, _ = run(capsys, "classify", "--algebra", files["b22"])
    assert code == 0
    assert out.strip() == "subdirectly irreducible, not simple; Body size 1; space Type 2"


def test_check_fails_with_witness(capsys, files):
    code, out, _ = run(capsys, "check", "C(x)' <= C(x)", "--algebra", files["chain4"])
    assert code == 0 and out.startswith("FAIL witness: x=d")
    code, _, _ = run(capsys, "check", "C(x)' <= C(x)", "--algebra", files["chain4"],
                     "--expect", "pass")
    assert code == 1
    code, _, _ = run(capsys, "check", "C(x)' <= C(x)", "--algebra", files["chain4"],
                     "--expect", "fail")
    assert code == 0


def test_check_pass(capsys, files):
    code, out, _ = run(capsys, "check", "x & x' <= y | y'", "--algebra", files["b22"],
                       "--expect", "pass")
    assert code == 0 and out.strip() == "PASS"


def test_free_decomp_table(capsys):
    code, out, _ = run(capsys, "free-decomp", "2")
    assert code == 0
    assert out.splitlines()[0] == "F(2) = 2^4 x 3^5 x B2^20 x B3^16 x B4^4"


def test_free_decomp_oracle(capsys):
    code, out, _ = run(capsys, "free-decomp", "2", "--oracle-verify", "2,3",
                       "--format", "structured-text")
    data = json.loads(out)
    assert code == 0
    assert [c["formula"] == c["oracle"] for c in data["oracle"]] == [True, True]


def test_variety_formats(capsys, files):
    code, out, _ = run(capsys, "variety", "--algebra", files["chain5"])
    assert code == 0
    rows = dict(line.rsplit(None, 1) for line in out.splitlines())
    assert rows["BPK"] == "yes" and rows["BPK1"] == "no"
    code, out, _ = run(capsys, "variety", "--algebra", files["chain5"], "--format",
                       "structured-text")
    assert json.loads(out)["BPK1"] is False


def test_build_product_export_roundtrip(capsys, files, tmp_path):
    code, out, _ = run(capsys, "build", "--si", "2,3")
    assert code == 0 and is_isomorphic(loads_algebra(out), build_si(2, 3))
    code, out, _ = run(capsys, "product", files["two"], files["chain4"])
    assert code == 0 and loads_algebra(out).n == 8
    code, out, _ = run(capsys, "export", "--algebra", files["b22"])
    assert is_isomorphic(loads_algebra(out), load_algebra(files["b22"]))
    code, out, _ = run(capsys, "export", "--algebra", files["b22"], "--format", "dot")
    assert out.startswith("digraph algebra {")


def test_homs(capsys, files):
    code, out, _ = run(capsys, "homs", files["two"], files["chain4"])
    assert code == 0 and out.strip() == "homomorphisms: 1"
    code, out, _ = run(capsys, "homs", files["b22"], "--auto", "--list")
    assert out.splitlines()[0] == "automorphisms: 2"
    code, out, _ = run(capsys, "homs", files["chain4"], files["two"], "--surjective")
    assert out.strip() == "surjective homomorphisms: 0"


def test_dual_and_congruences(capsys, files):
    code, out, _ = run(capsys, "dual", "--algebra", files["chain4"])
    assert "Body: {P1}" in out and "space type: Type2" in out
    code, out, _ = run(capsys, "dual", "--algebra", files["chain4"], "--format", "dot")
    assert out.startswith("digraph dual")
    code, out, _ = run(capsys, "congruences", "--algebra", files["chain4"], "--bruteforce")
    assert out.splitlines()[0] == "congruences: 3"
    assert "brute-force agrees: yes" in out


def test_validate(capsys, files, tmp_path):
    code, out, _ = run(capsys, "validate", "--algebra", files["b22"])
    assert code == 0 and out.startswith("valid pm-algebra with 8 elements")
    bad = tmp_path / "bad.alg"
    bad.write_text(json.dumps({"elements": 3, "covers": [[0, 1], [1, 2]], "neg": [2, 0, 0]}))
    code, out, _ = run(capsys, "validate", "--algebra", str(bad))
    assert code == 1 and "involution" in out


def test_error_prefixes(capsys, files, tmp_path):
    code, _, err = run(capsys, "classify", "--algebra", str(tmp_path / "missing.alg"))
    assert code == 1 and err.startswith("error[io]:")
    junk = tmp_path / "junk.alg"
    junk.write_text("{not json")
    code, _, err = run(capsys, "classify", "--algebra", str(junk))
    assert code == 1 and err.startswith("error[malformed]:")
    bad = tmp_path / "bad.alg"
    bad.write_text(json.dumps({"elements": 3, "covers": [[0, 1], [1, 2]], "neg": [2, 0, 0]}))
    code, _, err = run(capsys, "classify", "--algebra", str(bad))
    assert code == 1 and err.startswith("error[invalid-algebra]:")
    code, _, err = run(capsys, "classify", "--algebra", files["b22"], "--cap-elements", "4")
    assert code == 1 and err.startswith("error[cap]:")
    code, _, err = run(capsys, "check", "x &", "--algebra", files["b22"])
    assert code == 2 and err.startswith("error[syntax]:")
    code, _, err = run(capsys, "build", "--si", "0,2")
    assert code == 1 and err.startswith("error[domain]:")


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2


def test_deterministic_output(files):
    cmd = [sys.executable, "-m", "pmalg", "congruences", "--algebra", files["b22"]]
    first = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert first == second and first
