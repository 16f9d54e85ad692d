"""End-to-end CLI contract: commands, outputs, the exit-code scheme
(0 all-pass, 1 input error, 2 identity failure), and schema stability."""

import json
import pathlib

import jsonschema
import pytest

from qmanifold.cli import main
from qmanifold.manifest import TOL_ENV_VAR

SCHEMA = json.loads(
    (pathlib.Path(__file__).parent.parent / "docs" / "report_schema.json")
    .read_text())

FLAT = """
[metric]
A = 1
B = 1

[points]
p1 = 0, 0, 0
p2 = 1, 2, -0.5
"""

CATENOID = """
[metric]
A = cosh(x1)^2
B = x1^2

[points]
p1 = 1.0, 0.3, 0.7
p2 = 0.5, 1.0, 2.0
"""

BAD_POINT = """
[metric]
A = x1
B = 1

[points]
p1 = -1, 0, 0
"""


@pytest.fixture
def manifest_file(tmp_path):
    def write(content, name="manifest.ini"):
        path = tmp_path / name
        path.write_text(content)
        return str(path)
    return write


@pytest.fixture(autouse=True)
def clean_tolerance_env(monkeypatch):
    monkeypatch.delenv(TOL_ENV_VAR, raising=False)


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def test_analyze_flat(manifest_file, capsys):
    rc = main(["analyze", manifest_file(FLAT)])
    out = capsys.readouterr().out
    assert rc == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["status"] == "pass"
    assert len(doc["points"]) == 2
    first = doc["points"][0]
    assert first["classification"]["einstein"]["kind"] == "einstein"
    assert first["classification"]["einstein"]["alpha"] == 0.0
    assert first["classification"]["w1_residual"] == 0.0
    assert first["curvature"]["tau"] == 0.0


def test_analyze_catenoid(manifest_file, capsys):
    rc = main(["analyze", manifest_file(CATENOID)])
    doc = json.loads(capsys.readouterr().out)
    assert rc == 0
    for point in doc["points"]:
        cls = point["classification"]
        assert cls["einstein"]["kind"] == "generic"
        assert cls["w1_residual"] < 1e-8
        assert cls["con_ae_residual"] < 1e-7
        assert not cls["is_locally_product"]


def test_analyze_not_positive_definite(manifest_file, capsys):
    rc = main(["analyze", manifest_file(BAD_POINT)])
    err = capsys.readouterr().err
    assert rc == 1
    assert "not positive" in err


def test_analyze_missing_file(capsys):
    rc = main(["analyze", "/nonexistent/manifest.ini"])
    assert rc == 1


def test_analyze_syntax_error_in_metric(manifest_file, capsys):
    rc = main(["analyze", manifest_file("[metric]\nA = x1 +\nB = 1\n")])
    assert rc == 1
    assert "offset" in capsys.readouterr().err


def test_analyze_json_out_file(manifest_file, tmp_path, capsys):
    out_path = tmp_path / "report.json"
    rc = main(["analyze", manifest_file(FLAT), "--json-out", str(out_path)])
    assert rc == 0
    doc = json.loads(out_path.read_text())
    assert doc["manifest"]["metric"]["A"] == "1"


def test_analyze_tiny_tolerance_trips_exit_2(manifest_file, monkeypatch, capsys):
    # residuals are ~1e-16 but a sub-ulp gate must still report failure
    monkeypatch.setenv(TOL_ENV_VAR, "1e-30")
    rc = main(["analyze", manifest_file(CATENOID)])
    doc = json.loads(capsys.readouterr().out)
    assert rc == 2
    assert doc["status"] == "fail"


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_passes_and_is_deterministic(capsys):
    rc = main(["verify", "--seed", "11", "--count", "20"])
    first = capsys.readouterr().out
    assert rc == 0
    assert "result: pass" in first
    rc = main(["verify", "--seed", "11", "--count", "20"])
    second = capsys.readouterr().out
    assert rc == 0
    assert first == second


def test_verify_different_seed_changes_output(capsys):
    main(["verify", "--seed", "1", "--count", "10"])
    first = capsys.readouterr().out
    main(["verify", "--seed", "2", "--count", "10"])
    second = capsys.readouterr().out
    assert first != second


def test_verify_count_zero_is_usage_error(capsys):
    rc = main(["verify", "--count", "0"])
    assert rc == 1
    assert "count" in capsys.readouterr().err


def test_verify_bad_box(capsys):
    rc = main(["verify", "--box", "2,1", "--count", "5"])
    assert rc == 1


# ---------------------------------------------------------------------------
# catenoid
# ---------------------------------------------------------------------------

def test_catenoid_report_and_slices(tmp_path, capsys):
    rc = main(["catenoid", "--u", "1", "--emit-slices", "5",
               "--slice-dir", str(tmp_path)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "k(e1,e2)" in out
    assert "0.176378" in out
    assert "theta(e1) note" in out
    for name in ("s1.csv", "s2.csv"):
        lines = (tmp_path / name).read_text().splitlines()
        assert lines[0] == "x1,x2,x3"
        assert len(lines) == 26  # header + 5x5 grid
        assert all(len(line.split(",")) == 3 for line in lines[1:])


def test_catenoid_multiple_u_json(tmp_path, capsys):
    out_path = tmp_path / "catenoid.json"
    rc = main(["catenoid", "--u", "0.5", "--u", "2",
               "--json-out", str(out_path)])
    assert rc == 0
    doc = json.loads(out_path.read_text())
    jsonschema.validate(doc, SCHEMA)
    assert doc["status"] == "pass"
    assert [rep["u"] for rep in doc["reports"]] == [0.5, 2.0]
    for rep in doc["reports"]:
        record = rep["theta1_discrepancy"]
        assert record["trace_identity_residual_if_printed"] > 0.1
        assert "only at |u| = 1" in record["note"]


def test_catenoid_rejects_zero(capsys):
    rc = main(["catenoid", "--u", "0"])
    assert rc == 1
    assert "u = 0" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# basis
# ---------------------------------------------------------------------------

def test_basis_flat_report(manifest_file, capsys):
    rc = main(["basis", manifest_file(FLAT), "--x", "1,0,1"])
    doc = json.loads(capsys.readouterr().out)
    assert rc == 0
    jsonschema.validate(doc, SCHEMA)
    report = doc["points"][0]["report"]
    assert report["phi"] == pytest.approx(1.0471975511965979)
    assert report["psi"] == pytest.approx(1.5707963267948966)
    assert report["psi_right_angle"] is True
    assert report["con_r_residual"] is None
    assert all(v == 0 for v in report["sectional"].values())


def test_basis_catenoid_con_r(manifest_file, capsys):
    rc = main(["basis", manifest_file(CATENOID), "--x", "1,1,1"])
    doc = json.loads(capsys.readouterr().out)
    assert rc == 0
    for entry in doc["points"]:
        assert entry["report"]["con_r_residual"] < 1e-7


def test_basis_degenerate_vector(manifest_file, capsys):
    rc = main(["basis", manifest_file(FLAT), "--x", "0,0,1"])
    err = capsys.readouterr().err
    assert rc == 1
    assert "x3*((x1)^2 + (x2)^2)" in err


def test_basis_bad_vector_syntax(manifest_file, capsys):
    rc = main(["basis", manifest_file(FLAT), "--x", "1,2"])
    assert rc == 1
