import json
import subprocess
import sys

import pytest

from clifford_reality.cli import dumps, main, run


def test_verify_identities_passes():
    code, report, _ = run(["verify-identities", "--field", "5", "--form", "hyperbolic:2", "--samples", "5"])
    assert code == 0 and report["all_passed"]
    names = {c["name"] for c in report["checks"]}
    assert {"associativity", "chi_homomorphism", "standard_conjugator_identities"} <= names


def test_torus_command():
    code, report, _ = run(["torus", "--form", "hyperbolic:2", "--lambda0", "1/2", "--lambdas", "2,3"])
    assert code == 0
    assert report["norm"] == "3/2"


def test_conjugate_and_decompose():
    elem = json.dumps({"torus": {"lambda0": "1", "lambdas": ["2", "1/2"]}})
    code, report, _ = run(["conjugate", "--form", "hyperbolic:2", "--input", elem])
    assert code == 0
    code, report, _ = run(["decompose", "--form", "hyperbolic:2", "--input", elem])
    assert code == 0
    assert report["decomposition"]["eps1"] == "-1"


def test_decompose_not_real_is_an_error():
    elem = json.dumps({"torus": {"lambda0": "1/6", "lambdas": ["2", "3", "6"]}})
    code, report, _ = run(["decompose", "--form", "hyperbolic:3", "--input", elem])
    assert code == 2 and report["error"]["type"] == "NotRealOrUndecided"


def test_enumerate_command():
    code, report, _ = run(["enumerate", "--field", "3", "--form", "hyperbolic:1+anisotropic:[1]"])
    assert code == 0
    assert report["order"] == 24 and report["class_count"] == 7


def test_reality_report_table_mode():
    code, report, _ = run(["reality-report", "--field", "3", "--form", "hyperbolic:2"])
    assert code == 0 and report["mode"] == "enumeration"


def test_reality_report_coset_mode():
    code, report, _ = run(["reality-report", "--field", "5", "--form", "hyperbolic:3", "--samples", "2"])
    assert code == 0 and report["mode"] == "coset" and len(report["samples"]) == 2


def test_lift_command():
    # swap e1 <-> e2 and f1 <-> f2 in hyperbolic:2 (Witt order e1 f1 e2 f2)
    m = "[[0,0,1,0],[0,0,0,1],[1,0,0,0],[0,1,0,0]]"
    code, report, _ = run(["lift", "--form", "hyperbolic:2", "--matrix", m])
    assert code == 0


@pytest.mark.parametrize("argv,err", [
    (["torus", "--form", "hyperbolic:1", "--field", "4", "--lambdas", "2"], "NotPrime"),
    (["torus", "--form", "hyperbolic:1", "--field", "2", "--lambdas", "2"], "EvenCharacteristic"),
    (["torus", "--gram", "[[1,2],[3,1]]", "--lambdas", "2"], "ConfigInvalid"),
    (["torus", "--gram", "[[1,0]]", "--lambdas", "2"], "ConfigInvalid"),
    (["torus", "--form", "hyperbolic:1", "--lambdas", "0"], "ZeroParameter"),
    (["enumerate", "--field", "7", "--form", "hyperbolic:2"], "OrderCapExceeded"),
    (["verify-identities"], "ConfigInvalid"),
])
def test_errors_exit_with_code_two(argv, err):
    code, report, _ = run(argv)
    assert code == 2
    assert report["error"]["type"] == err


def test_main_writes_json(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["torus", "--form", "hyperbolic:1", "--lambdas", "2", "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "PASS" in text and "result: PASS" in text
    assert json.loads(out.read_text())["command"] == "torus"


def test_reports_are_byte_identical():
    argv = ["verify-identities", "--field", "7", "--form", "hyperbolic:1+diag:[3]", "--seed", "42", "--samples", "5"]
    assert dumps(run(argv)[1]) == dumps(run(argv)[1])


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "clifford_reality.cli", "torus", "--form", "hyperbolic:1",
                           "--lambdas", "2", "--json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["all_passed"]
