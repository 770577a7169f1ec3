"""End-to-end checks of the command line interface."""

import json

import pytest

from torsionlab.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def matrix_file(tmp_path):
    path = tmp_path / "matrix.json"
    path.write_text(json.dumps({
        "rows": 2, "cols": 2,
        "entries": [["T(1/2) + T(1)", "2"], ["0", "T(2)"]],
    }))
    return str(path)


@pytest.fixture
def complex_file(tmp_path):
    # H^1 of this complex is T-torsion of exponent 1 in two spots.
    path = tmp_path / "complex.json"
    path.write_text(json.dumps({
        "ranks": [2, 2],
        "differentials": [
            {"rows": 2, "cols": 2,
             "entries": [["T(1)", "0"], ["0", "T(1)"]]},
        ],
        "trunc": "4",
    }))
    return str(path)


def test_torsion_inline_model(capsys):
    code, out, err = invoke(
        capsys, "torsion",
        "--model", "sphere:3/2xsphere:5xsphere:5", "--fiber", "3/4,2,2")
    assert code == 0
    assert "torsion: 2, 2, 2, 2 (exact)" in out
    assert "threshold: 2 (= 2, exact)" in out
    assert "non_displaceable: no" in out
    assert "elapsed:" in err and "elapsed:" not in out


def test_torsion_json_model_file(capsys, tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({
        "product": [{"sphere": "3/2"}, {"sphere": "5"}, {"sphere": "5"}],
    }))
    code, out, _ = invoke(capsys, "torsion", "--model", str(path),
                          "--fiber", "3/4,2,2")
    assert code == 0
    assert "threshold: 2 (= 2, exact)" in out


def test_torsion_cylinder_component_vanishes(capsys):
    code, out, _ = invoke(capsys, "torsion", "--model", "cylinderxsphere:1",
                          "--fiber", "3/4,1/2")
    assert code == 0
    assert "covector: T(3/4), 0" in out
    assert "threshold: 3/4" in out


def test_json_output_carries_provenance(capsys):
    code, out, _ = invoke(
        capsys, "--json", "torsion",
        "--model", "sphere:1xsphere:1", "--fiber", "1/2,1/2")
    assert code == 0
    data = json.loads(out)
    assert data["command"] == "torsion"
    assert data["threshold"] == {"fraction": "inf", "decimal": None,
                                 "provenance": "exact"}
    assert data["betti"] == 4
    assert data["non_displaceable"] is True
    for area in data["facet_areas"]:
        assert area["provenance"] == "exact"


def test_stdout_byte_identical_across_runs(capsys):
    argv = ("--json", "polydisk", "--mode", "1.5", "--n", "3", "--k", "2",
            "--S", "2", "--lambda", "10")
    code1, out1, _ = invoke(capsys, *argv)
    code2, out2, _ = invoke(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_verify_deterministic_for_fixed_seed(capsys):
    argv = ("verify", "--suite", "hofer", "--seed", "7")
    _, out1, _ = invoke(capsys, *argv)
    _, out2, _ = invoke(capsys, *argv)
    assert out1 == out2
    assert "passed: yes" in out1


def test_verify_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("TORSIONLAB_SEED", "13")
    code, out, _ = invoke(capsys, "verify", "--suite", "hofer")
    assert code == 0
    assert "seed: 13" in out


def test_polydisk_bound_and_claim(capsys):
    code, out, _ = invoke(capsys, "polydisk", "--mode", "1.4",
                          "--n", "3", "--S", "2")
    assert code == 0
    assert "bound: 2 (= 2, exact)" in out
    assert "certified: yes" in out
    assert "displacement energy at least 2" in out


def test_polydisk_constraint_violation_exits_2(capsys):
    code, out, err = invoke(capsys, "polydisk", "--mode", "1.4",
                            "--n", "3", "--S", "1/2")
    assert code == 2
    assert out == ""
    assert "error:" in err


def test_polydisk_extrapolation_is_uncertified(capsys):
    code, out, _ = invoke(capsys, "polydisk", "--mode", "1.4", "--n", "3",
                          "--S", "1/2", "--extrapolate")
    assert code == 0
    assert "certified: no" in out


def test_snf_reports_pivots(capsys, matrix_file):
    code, out, _ = invoke(capsys, "snf", "--matrix", matrix_file)
    assert code == 0
    assert "rank: 2" in out
    assert "pivot_valuations: 0, 5/2 (exact)" in out


def test_decompose_with_hofer_norm(capsys, complex_file):
    code, out, _ = invoke(capsys, "decompose", "--complex", complex_file,
                          "--hofer", "1/2")
    assert code == 0
    assert "torsion: 1, 1 (exact)" in out
    assert "threshold: 1 (= 1, exact)" in out
    assert "surviving_torsion: 2" in out
    assert "intersection_bound: 4" in out


def test_decompose_precision_exhausted_exits_3(capsys, tmp_path):
    # Truncation hides the composition, so a negative rank shows up.
    path = tmp_path / "tight.json"
    path.write_text(json.dumps({
        "ranks": [1, 1, 1],
        "differentials": [
            {"rows": 1, "cols": 1, "entries": [["T(1)"]]},
            {"rows": 1, "cols": 1, "entries": [["T(1)"]]},
        ],
        "trunc": "2",
    }))
    code, out, err = invoke(capsys, "decompose", "--complex", str(path))
    assert code == 3
    assert out == ""
    assert "precision exhausted" in err


def test_bad_fiber_exits_2(capsys):
    code, _, err = invoke(capsys, "torsion", "--model", "sphere:1",
                          "--fiber", "1/2,1/2")
    assert code == 2
    assert "error:" in err


def test_boundary_fiber_exits_2(capsys):
    code, _, err = invoke(capsys, "torsion", "--model", "sphere:1",
                          "--fiber", "0")
    assert code == 2
    assert "error:" in err


def test_unknown_inline_factor_exits_2(capsys):
    code, _, err = invoke(capsys, "torsion", "--model", "torus:1",
                          "--fiber", "1/2")
    assert code == 2
    assert "cannot read factor" in err


def test_missing_matrix_file_exits_2(capsys):
    code, _, err = invoke(capsys, "snf", "--matrix", "/no/such/file.json")
    assert code == 2
    assert "error:" in err


def test_failed_suite_exits_2(capsys):
    code, out, _ = invoke(capsys, "verify", "--suite", "actiondiff",
                          "--resolution", "0.25", "--tol", "1e-15")
    assert code == 2
    assert "passed: no" in out


def test_optimize_equator_is_nondisplaceable(capsys):
    code, out, _ = invoke(capsys, "optimize", "--model", "sphere:1xsphere:1",
                          "--resolution", "4")
    assert code == 0
    assert "fiber: 1/2, 1/2 (exact)" in out
    assert "value: inf (exact)" in out
    assert "non_displaceable: yes" in out
