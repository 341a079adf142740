import json

import jsonschema
import pytest

from shearode.cli import main
from shearode.report import load_schema, render_text

SCHEMA = load_schema()


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    return code, report


def test_classify_family_a(capsys):
    code, report = run_json(capsys, "classify", "--f0", "y^2", "--f1", "0")
    assert code == 0
    cls = report["results"]["classification"]
    assert cls["label"] == "FAMILY_A" and cls["k"] == 2
    assert report["inputs"]["f0"] == "y^2"
    assert report["certified_order"] == 24


def test_parse_error_exit_code(capsys):
    code, report = run_json(capsys, "classify", "--f0", "y^2+", "--f1", "0")
    assert code == 2
    assert report["status"] == "error"
    assert report["error"]["type"] == "ExprSyntaxError"
    assert report["error"]["position"] == 4


def test_precondition_exit_code(capsys):
    code, report = run_json(capsys, "classify", "--f0", "1/(y)", "--f1", "0")
    assert code == 3
    assert report["error"]["type"] == "ZeroConstantTerm"


def test_insufficient_truncation_exit_code(capsys):
    code, report = run_json(capsys, "classify", "--f0", "y^5*(1-y)^-8", "--f1", "0", "--truncation", "10")
    assert code == 3
    assert report["error"]["type"] == "InsufficientTruncation"


def test_symmetries_quartic(capsys):
    code, report = run_json(capsys, "symmetries", "--f0", "1", "--f1", "0")
    basis = report["results"]["basis"]
    assert code == 0
    assert basis["dimension"] == 3 and basis["closed"]
    assert basis["killing_determinant"] != "0"


def test_symmetries_isotropic(capsys):
    code, report = run_json(capsys, "symmetries", "--f0", "y", "--f1", "0", "--ansatz", "isotropic")
    assert report["results"]["basis"]["dimension"] == 2


def test_phi_solve(capsys):
    code, report = run_json(
        capsys, "phi-solve", "--branch", "TWO", "--k", "2", "--a", "-1",
        "--phi-k", "-1", "--phi-k1", "0", "--truncation", "16",
    )
    res = report["results"]
    assert code == 0
    assert res["phi_residual_zero"] and res["symmetry_residual_zero"]
    assert res["phi"][0] == "1/2"
    assert res["c0_identity"] is None


def test_phi_solve_tuned(capsys):
    code, report = run_json(
        capsys, "phi-solve", "--branch", "ONE", "--k", "2", "--a", "-1",
        "--phi-k", "-1", "--phi-k1", "0", "--tune-c0", "--truncation", "16",
    )
    res = report["results"]
    assert res["f0"] == "0"
    assert res["c0_identity"] is True
    assert res["resonances"] == [2]


def test_phi_solve_tune_needs_branch_one(capsys):
    code, report = run_json(
        capsys, "phi-solve", "--branch", "TWO", "--k", "2", "--a", "-1",
        "--phi-k", "-1", "--phi-k1", "0", "--tune-c0",
    )
    assert code == 3


def test_phi_solve_zero_leading(capsys):
    code, report = run_json(
        capsys, "phi-solve", "--branch", "TWO", "--k", "2", "--a", "-1", "--phi-k", "0", "--phi-k1", "0",
    )
    assert code == 3 and report["error"]["type"] == "ZeroLeading"


def test_sl2_check(capsys):
    code, report = run_json(capsys, "sl2-check")
    assert code == 0
    assert report["results"]["all_passed"]
    assert all(report["results"]["identities"].values())


def test_dual_check(capsys):
    code, report = run_json(capsys, "dual-check", "--samples", "10")
    assert code == 0
    assert report["results"]["dual_ok"] and report["results"]["lie_ok"]


def test_dual_check_tolerance_failure(capsys):
    code, report = run_json(capsys, "dual-check", "--tolerance", "1e-30")
    assert code == 4
    assert report["error"]["type"] == "VerificationFailure"


def test_locus_check(capsys):
    code, report = run_json(capsys, "locus-check", "--orbit", "2", "3", "0", "1")
    assert code == 0
    assert report["results"]["fixed_points"]["case"] == "DEGENERATE_BETA"
    assert report["results"]["gamma_orbit"]["factor"] == "4"


def test_output_is_byte_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        assert main(["dual-check", "--seed", "5", "--out", str(path)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert capsys.readouterr().out == ""


def test_text_format(capsys):
    code, out = run(capsys, "classify", "--f0", "0", "--f1", "0", "--format", "text")
    assert code == 0
    assert out.startswith("classify (ok)")
    assert "results.classification.label: QUADRIC" in out


def test_render_text_error():
    text = render_text({"command": "classify", "status": "error", "inputs": {}, "results": {},
                        "certified_order": None, "error": {"type": "X", "message": "m", "exit_code": 3}})
    assert "error.type: X" in text


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["nope"])
    assert info.value.code == 2


def test_schema_rejects_missing_error():
    bad = {"schema_version": "1", "tool_version": "0", "command": "classify", "status": "error",
           "inputs": {}, "results": {}, "certified_order": None}
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, SCHEMA)
