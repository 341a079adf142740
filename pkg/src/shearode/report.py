"""Report payloads for the CLI commands and their stable serialization."""

from __future__ import annotations

import json
import random
from importlib import resources
from typing import Dict, List, Optional

from . import __version__
from .classify import classify
from .duality import (
    QuarticIsotropyField,
    dual_family_jets,
    dual_residual_check,
    fixed_point_set,
    gamma_orbit_check,
    involution_check,
    lie_form_check,
    mobius_action_check,
    random_unimodular,
)
from .errors import ExprSyntaxError, PreconditionError, ShearOdeError, VerificationFailure
from .fields import VectorField
from .gauss import scalar_str, to_gauss
from .ode import make_shear_ode
from .parser import parse_expr
from .phi import Branch, check_c0_identity, extract_ode, phi_residual, solve_phi, tune_c0
from .symmetry import SymmetryBasis, determining_residual, solve_isotropic, solve_polynomial_ansatz
from .verification import criterion_4, run_all

SCHEMA_VERSION = "1"

__all__ = [
    "SCHEMA_VERSION",
    "load_schema",
    "make_report",
    "error_report",
    "dumps",
    "render_text",
    "exit_code_for",
    "classify_payload",
    "symmetries_payload",
    "phi_payload",
    "sl2_payload",
    "dual_payload",
    "locus_payload",
    "verify_payload",
]


def load_schema() -> dict:
    text = resources.files("shearode").joinpath("report_schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def make_report(command: str, inputs: dict, results: dict, certified_order=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "status": "ok",
        "inputs": inputs,
        "results": results,
        "certified_order": certified_order,
    }


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ExprSyntaxError):
        return 2
    if isinstance(exc, VerificationFailure):
        return 4
    return 3


def error_report(command: str, inputs: dict, exc: ShearOdeError) -> dict:
    out = make_report(command, inputs, {})
    out["status"] = "error"
    out["error"] = {"type": type(exc).__name__, "message": str(exc), "exit_code": exit_code_for(exc)}
    pos = getattr(exc, "pos", None)
    if pos is not None:
        out["error"]["position"] = pos
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def render_text(report: dict) -> str:
    lines = [f"{report['command']} ({report['status']})"]

    def walk(obj, prefix):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(obj[k], f"{prefix}.{k}" if prefix else str(k))
        elif isinstance(obj, list) and obj and all(isinstance(v, (dict, list)) for v in obj):
            for i, v in enumerate(obj):
                walk(v, f"{prefix}[{i}]")
        else:
            lines.append(f"  {prefix}: {json.dumps(obj) if not isinstance(obj, str) else obj}")

    walk({k: report[k] for k in ("inputs", "results", "certified_order", "error") if k in report}, "")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- payloads
def _field_table(v: VectorField) -> Dict[str, str]:
    return {name: str(comp) for name, comp in zip(v.coords, v.components)}


def _basis_table(basis: SymmetryBasis) -> dict:
    st = basis.structure
    consts = [[[scalar_str(c) for c in row] for row in plane] for plane in st.constants]
    killing_det = st.killing_determinant()
    return {
        "dimension": basis.dimension,
        "generators": [_field_table(g) for g in basis.generators],
        "parameters": [{k: scalar_str(v) for k, v in sorted(p.items()) if v} for p in basis.parameters],
        "structure_constants": consts,
        "closed": st.closed,
        "killing_determinant": None if killing_det is None else scalar_str(killing_det),
    }


def _pair(f0_expr: str, f1_expr: str, N: int):
    return parse_expr(f0_expr, N), parse_expr(f1_expr, N)


def classify_payload(f0_expr: str, f1_expr: str, N: int):
    f0, f1 = _pair(f0_expr, f1_expr, N)
    report = classify(f0, f1, N)
    return {"classification": report.to_dict()}, report.certified_order


def symmetries_payload(f0_expr: str, f1_expr: str, N: int, ansatz: str = "polynomial", degx: int = 3, degy: int = 3):
    f0, f1 = _pair(f0_expr, f1_expr, N)
    ode = make_shear_ode(f0, f1)
    if ansatz == "isotropic":
        basis = solve_isotropic(ode)
    else:
        basis = solve_polynomial_ansatz(ode, degx, degy)
    return {"ansatz": ansatz, "basis": _basis_table(basis)}, basis.certified_order


def phi_payload(
    branch: str,
    k: int,
    a: str,
    phi_k: str,
    phi_k1: str,
    phi_free: Optional[str],
    N: int,
    tune: bool = False,
):
    a, phi_k, phi_k1 = to_gauss(a), to_gauss(phi_k), to_gauss(phi_k1)
    if tune:
        if Branch(branch) is not Branch.ONE:
            raise PreconditionError("f0 can only be tuned away in branch ONE")
        sol = tune_c0(k, a, phi_k, phi_k1, N)
    else:
        free = None if phi_free is None else to_gauss(phi_free)
        sol = solve_phi(Branch(branch), k, a, phi_k, phi_k1, free, N)
    res = phi_residual(sol.phi, sol.a)
    ode, extra = extract_ode(sol)
    sym = determining_residual(ode, extra)
    results = {
        "branch": sol.branch.value,
        "k": sol.k,
        "ell": sol.ell,
        "a": scalar_str(sol.a),
        "phi": [scalar_str(c) for c in sol.phi.coefficients()],
        "free_params": {k: scalar_str(v) for k, v in sorted(sol.free_params.items())},
        "resonances": list(sol.resonances),
        "f0": str(sol.f0),
        "f1": str(sol.f1),
        "phi_residual_zero": res.is_zero(),
        "phi_residual_order": res.trunc,
        "extra_symmetry": _field_table(extra),
        "symmetry_residual_zero": sym.is_zero(),
        "symmetry_residual_order": sym.trunc,
        # only meaningful once f0 vanishes identically
        "c0_identity": check_c0_identity(sol.f1, sol.a) if sol.f0.is_zero() else None,
    }
    return results, sym.trunc


def sl2_payload():
    res = criterion_4()
    return {"identities": res.details, "all_passed": res.passed}, None


def dual_payload(seed: int, tolerance: float, n: int = 20):
    jets = dual_family_jets(n, seed)
    dual = dual_residual_check(jets, tolerance, strict=False)
    lie = lie_form_check(jets, tolerance, strict=False)
    inv = involution_check(n, seed, tolerance, strict=False)
    rng = random.Random(seed)
    mob = [mobius_action_check(random_unimodular(rng)) for _ in range(10)]
    results = {
        "samples": n,
        "dual_max_residual": dual.max_residual,
        "dual_ok": dual.ok,
        "lie_max_residual": lie.max_residual,
        "lie_ok": lie.ok,
        "involution_max_residual": inv.max_residual,
        "involution_ok": inv.ok,
        "mobius_results": mob,
    }
    if not (dual.ok and lie.ok and inv.ok and all(mob)):
        raise VerificationFailure("a duality check exceeded the tolerance")
    return results, None


def locus_payload(alpha: str, beta: str, delta: str, orbit: List[str]):
    fps = fixed_point_set(QuarticIsotropyField(to_gauss(alpha), to_gauss(beta), to_gauss(delta)))
    results = {
        "fixed_points": {
            "case": fps.case.value,
            "description": fps.description,
            "equations": list(fps.equations),
            "on_gamma": fps.on_gamma,
            "verified": fps.verified,
        }
    }
    if orbit:
        a, b, c, d = (to_gauss(v) for v in orbit)
        (r,) = gamma_orbit_check([(a, b, c, d)])
        results["gamma_orbit"] = {
            "params": [scalar_str(v) for v in r.params],
            "factor": scalar_str(r.factor),
            "pushforward_ok": r.pushforward_ok,
            "reference_on_gamma": r.reference_on_gamma,
        }
    return results, None


def verify_payload(seed: int, N: int, tolerance: float):
    results = run_all(seed=seed, N=N, tolerance=tolerance)
    items = [
        {"criterion": r.number, "title": r.title, "passed": r.passed, "details": _jsonable(r.details)}
        for r in results
    ]
    summary = {"passed": sum(r.passed for r in results), "total": len(results)}
    return {"criteria": items, "summary": summary}, N


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return scalar_str(obj)
