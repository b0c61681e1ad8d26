import json
import subprocess
import sys
from fractions import Fraction

import pytest

from hesscay.algebra import canonicalize, parse_form
from hesscay.cli import main
from hesscay.cubic import cayleyan_weierstrass, weierstrass_form
from hesscay.polarity import hessian_form

from conftest import DATA, FIXTURES

GOLDEN = DATA / "golden"
GOLDEN_CASES = {
    "hessian_1_0": ["hessian", "--A", "1", "--B", "0"],
    "f0_2_3": ["f0", "--A", "2", "--B", "3"],
    "cayleyan_1_1_p101": ["cayleyan", "--A", "1", "--B", "1", "--p", "101"],
    "family_anti_2_3": ["family", "--A", "2", "--B", "3", "--kind", "anti", "--t", "0"],
    "genus2_1_1": ["genus2", "--A", "1", "--B", "1", "--p", "101"],
}


def run_cli(capsys, *argv):
    code = main(list(argv) + ["--fixtures", str(FIXTURES)])
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_hessian_output_roundtrip(capsys):
    code, rep, _ = run_cli(capsys, "hessian", "--A", "1", "--B", "0")
    assert code == 0
    He = parse_form(rep["outputs"]["He"])
    assert He == canonicalize(parse_form("3*x^2*z + 3*x*y^2 - z^3"))
    assert He == canonicalize(hessian_form(weierstrass_form(Fraction(1), Fraction(0))))
    assert all(c["status"] == "pass" for c in rep["checks"])


@pytest.mark.parametrize("cmd", ["hessian", "cayleyan", "f0", "genus2"])
def test_hypothesis_violation_exit_code(capsys, cmd):
    code, rep, _ = run_cli(capsys, cmd, "--A", "0", "--B", "1")
    assert code == 2
    assert rep["error"]["type"] == "HypothesisViolation"
    expected = "not squarefree" if cmd == "genus2" else "A(4A^3+27B^2)=0"
    assert expected in rep["error"]["message"]


def test_singular_curve_exit_code(capsys):
    code, rep, _ = run_cli(capsys, "f0", "--A", "-3", "--B", "2")
    assert code == 2


def test_cayleyan_with_field(capsys):
    code, rep, _ = run_cli(capsys, "cayleyan", "--A", "1", "--B", "1", "--p", "101")
    assert code == 0
    assert parse_form(rep["outputs"]["Ca"], dual=True) == \
        cayleyan_weierstrass(Fraction(1), Fraction(1))
    assert "Ca_interpolated" in rep["outputs"]


def test_f0_outputs(capsys):
    code, rep, _ = run_cli(capsys, "f0", "--A", "2", "--B", "3")
    assert code == 0
    assert rep["outputs"]["F0_primed"] == "xi^3 - 275*xi*zeta^2 - 275*eta^2*zeta - 1650*zeta^3"
    assert rep["outputs"]["F0"] == "6*xi^3 - 8*xi^2*zeta - 275*xi*eta^2 - 27*xi*zeta^2 + 4*zeta^3"


def test_family_examples(capsys):
    code, rep, _ = run_cli(capsys, "family", "--A", "2", "--B", "3", "--kind", "symplectic")
    assert code == 0
    assert rep["outputs"]["standard_form"] == {"a": "2", "b": "3"}
    code, rep, _ = run_cli(capsys, "family", "--A", "2", "--B", "3", "--kind", "anti")
    assert code == 0
    names = {c["name"]: c["status"] for c in rep["checks"]}
    assert names["j(F0) * j(E0) = 1728^2"] == "pass"


def test_family_singular_member(capsys):
    code, rep, _ = run_cli(capsys, "family", "--A", "3", "--B", "1", "--t", "1/3")
    assert code == 0
    assert rep["outputs"]["member_singular"] == {"multiplicity": 3}
    assert rep["checks"][0]["status"] == "warn"


@pytest.mark.parametrize("kind,verdict", [("symplectic", "Symplectic"),
                                          ("anti", "AntiSymplectic")])
def test_classify(capsys, kind, verdict):
    code, rep, _ = run_cli(capsys, "classify", "--kind", kind)
    assert code == 0
    assert rep["outputs"]["verdict"] == verdict
    code, rep, _ = run_cli(capsys, "classify", "--kind", kind, "--mangle")
    assert code == 0
    assert rep["outputs"]["verdict"] == "Neither"


def test_classify_on_prime_field(capsys):
    code, rep, _ = run_cli(capsys, "classify", "--A", "7", "--B", "0", "--p", "13",
                           "--kind", "anti")
    assert code == 0 and rep["outputs"]["verdict"] == "AntiSymplectic"


def test_classify_suggests_extension(capsys):
    code, rep, _ = run_cli(capsys, "classify", "--A", "1", "--B", "1", "--p", "7")
    assert code == 2
    assert "--k" in rep["error"]["message"]


def test_genus2_and_verify_all(capsys):
    code, rep, _ = run_cli(capsys, "genus2", "--A", "1", "--B", "1", "--p", "101")
    assert code == 0
    assert rep["outputs"]["psi2_ramification_at_infinity"]["index"] == 3
    code, rep, _ = run_cli(capsys, "verify-all", "--A", "1", "--B", "1")
    assert code == 0
    assert rep["checks"] and all(c["status"] == "pass" for c in rep["checks"])


def test_json_file_output(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, rep, _ = run_cli(capsys, "hessian", "--A", "2", "--B", "5", "--json", str(path))
    assert code == 0
    assert json.loads(path.read_text()) == rep


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_and_deterministic(capsys, name):
    _, _, first = run_cli(capsys, *GOLDEN_CASES[name])
    _, _, second = run_cli(capsys, *GOLDEN_CASES[name])
    assert first == second
    assert first == (GOLDEN / f"{name}.json").read_text()


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "hesscay.cli", "hessian", "--A", "1", "--B", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "hessian"
