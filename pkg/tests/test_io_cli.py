import json
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sun_euler import cli, io
from sun_euler.errors import NumericError, ParseError
from sun_euler.group import build_elements, random_coordinates

finite = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=200)
@given(finite)
def test_float_roundtrip_exact(x):
    assert float(io.format_float(x)) == x


def test_non_finite_rejected():
    with pytest.raises(NumericError):
        io.format_float(float("inf"))
    with pytest.raises(NumericError):
        io.dumps({"a": [float("nan")]})


@settings(max_examples=50)
@given(st.lists(finite, min_size=8, max_size=8))
def test_json_coordinates_roundtrip(a):
    text = io.dumps({"n": 3, "angles": a})
    c = io.parse_coordinates(text)
    assert c.n == 3 and list(c.angles) == a


def test_matrix_json_roundtrip():
    m = build_elements(3, random_coordinates(3, np.random.default_rng(1)))[0]
    data = json.loads(io.dumps(io.matrix_json(3, m)))
    assert np.array_equal(io.pairs_to_matrix(data["matrix"]), m)


def test_pairs_to_matrix_bad_shape():
    with pytest.raises(ParseError):
        io.pairs_to_matrix([[1, 2], [3, 4]])


def test_angles_csv_roundtrip():
    a = random_coordinates(3, np.random.default_rng(2), size=5)
    text = io.angles_to_csv(3, a)
    assert text.splitlines()[0].startswith("L2.theta1,L2.phi1")
    assert np.array_equal(io.csv_to_angles(text, 3), a)


def test_matrices_csv_roundtrip():
    m = build_elements(2, random_coordinates(2, np.random.default_rng(3), size=4))
    text = io.matrices_to_csv(2, m)
    assert text.splitlines()[0] == "re_0_0,im_0_0,re_0_1,im_0_1,re_1_0,im_1_0,re_1_1,im_1_1"
    assert np.array_equal(io.csv_to_matrices(text, 2), m)
    with pytest.raises(ParseError):
        io.csv_to_matrices(text, 3)


def test_csv_errors_report_position():
    text = io.angles_to_csv(2, np.zeros((2, 3))).replace("0,0,0\n0,0,0", "0,0,0\n0,x,0")
    with pytest.raises(ParseError, match="line 3, field 2"):
        io.csv_to_angles(text, 2)
    with pytest.raises(ParseError, match="line 2: expected 3"):
        io.csv_to_angles("su2.phi,su2.theta,su2.psi\n1,2\n", 2)
    with pytest.raises(ParseError, match="header"):
        io.csv_to_angles("a,b,c\n", 2)


def test_json_errors_report_position():
    with pytest.raises(ParseError, match="line 2, column"):
        io.parse_coordinates('{"n": 2,\n "angles": [0, 0,, 0]}')
    with pytest.raises(ParseError, match="angles\\[1\\]"):
        io.parse_coordinates('{"n": 2, "angles": [0, "x", 0]}')
    with pytest.raises(ParseError, match="needs 3"):
        io.parse_coordinates('{"n": 2, "angles": [0, 0]}')
    with pytest.raises(ParseError, match="needs --n"):
        io.parse_coordinates("[0, 0, 0]")
    with pytest.raises(ParseError, match="'n'"):
        io.parse_coordinates('{"n": 2.5, "angles": []}')
    with pytest.raises(ParseError):
        io.parse_coordinates('{"n": 3, "angles": [0,0,0]}', n=2)


# ---------------------------------------------------------------------------
# command line (in-process)

def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_element_identity(capsys):
    code, out, _ = run(capsys, "element", "--n", "2", "--angles", "[0,0,0]")
    assert code == 0
    data = json.loads(out)
    assert np.array_equal(io.pairs_to_matrix(data["matrix"]), np.eye(2))


def test_cli_element_matches_library(capsys, tmp_path):
    a = random_coordinates(3, np.random.default_rng(4))
    f = tmp_path / "c.json"
    f.write_text(io.dumps({"n": 3, "angles": a}))
    code, out, _ = run(capsys, "element", "--n", "3", "--input", str(f))
    assert code == 0
    assert np.array_equal(io.pairs_to_matrix(json.loads(out)["matrix"]), build_elements(3, a)[0])


def test_cli_density(capsys):
    q = math.pi / 4
    angles = json.dumps([0.3, q, 1.1, q, 0.2, math.pi / 8, 0.4, 0.5])
    code, out, _ = run(capsys, "density", "--n", "3", "--angles", angles)
    assert code == 0
    assert json.loads(out)["density"] == pytest.approx(0.25 * math.sin(q) * math.sqrt(3))


def test_cli_validation_exit_2(capsys):
    code, _, err = run(capsys, "element", "--n", "2", "--angles", "[0, 2.0, 0]")
    assert code == 2
    assert "su2.theta" in err
    code, _, _ = run(capsys, "element", "--n", "2", "--angles", "[0, 2.0, 0]", "--no-validate")
    assert code == 0


def test_cli_parse_errors_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "element", "--n", "2", "--angles", "[0, 0")
    assert code == 2 and "line 1" in err
    code, _, err = run(capsys, "element", "--n", "2", "--input", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, err = run(capsys, "element", "--n", "2")
    assert code == 2


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit) as ei:
        cli.main(["element", "--n", "1", "--angles", "[]"])
    assert ei.value.code == 2
    with pytest.raises(SystemExit):
        cli.main(["sample", "--n", "2", "--count", "0"])


def test_cli_explain_layout(capsys):
    code, out, _ = run(capsys, "element", "--n", "3", "--explain-layout")
    assert code == 0
    assert "L2.omega" in out and "su2.psi" in out


def test_cli_sample_reproducible(capsys):
    _, a, _ = run(capsys, "sample", "--n", "3", "--count", "4", "--seed", "9")
    _, b, _ = run(capsys, "sample", "--n", "3", "--count", "4", "--seed", "9")
    assert a == b
    assert np.array(json.loads(a)["angles"]).shape == (4, 8)


def test_cli_sample_csv_and_matrices(capsys, tmp_path):
    out_file = tmp_path / "m.csv"
    code, _, _ = run(capsys, "sample", "--n", "2", "--count", "3", "--matrices",
                     "--format", "csv", "--output", str(out_file))
    assert code == 0
    m = io.csv_to_matrices(out_file.read_text(), 2)
    assert m.shape == (3, 2, 2)
    assert np.allclose(np.linalg.det(m), 1)
    _, text, _ = run(capsys, "sample", "--n", "2", "--count", "3", "--format", "csv")
    assert io.csv_to_angles(text, 2).shape == (3, 3)


def test_cli_volume(capsys):
    code, out, _ = run(capsys, "volume", "--n", "3")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(math.sqrt(3) * math.pi ** 5, rel=1e-14)
    code, out, _ = run(capsys, "volume", "--n", "2", "--method", "mc", "--samples", "20000", "--seed", "1")
    d = json.loads(out)
    assert code == 0 and abs(d["value"] - 2 * math.pi ** 2) < 5 * d["stderr"]


def test_cli_metric_compare(capsys):
    a = random_coordinates(3, np.random.default_rng(5), 0.05)
    code, out, _ = run(capsys, "metric", "--n", "3", "--point", io.dumps(a), "--compare")
    assert code == 0
    assert json.loads(out)["max_deviation"] < 1e-6


def test_cli_basis(capsys):
    code, out, _ = run(capsys, "basis", "--n", "2")
    assert code == 0
    g = json.loads(out)["generators"]
    assert np.array_equal(io.pairs_to_matrix(g[1]), np.array([[0, -1j], [1j, 0]]))


def test_cli_verify(capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--suite", "commutators")
    assert code == 0
    assert "FAIL" not in out and "checks passed" in out


def test_cli_verify_failure_exit_1(capsys, monkeypatch):
    from sun_euler import verification

    def broken(n, samples, seed):
        return [verification.Check("forced", 1.0, 0.0, False)]

    monkeypatch.setitem(verification._SUITES, "volume", broken)
    code, out, _ = run(capsys, "verify", "--n", "2", "--suite", "volume")
    assert code == 1 and "FAIL" in out


def test_cli_numeric_error_exit_3(capsys, monkeypatch):
    monkeypatch.setattr(cli.measure, "volume_closed_form", lambda n: float("inf"))
    code, _, err = run(capsys, "volume", "--n", "3")
    assert code == 3 and "numeric" in err


def test_console_script_module_entry():
    r = subprocess.run([sys.executable, "-m", "sun_euler.cli", "volume", "--n", "2"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert json.loads(r.stdout)["value"] == pytest.approx(2 * math.pi ** 2)
