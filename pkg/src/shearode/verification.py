"""The eight reproducibility criteria as callable checks.

Each check returns a :class:`CriterionResult`; ``run_all`` runs them in order.
Random inputs come from ``random.Random(seed)`` so runs are repeatable.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List

from .classify import Label, classify, closed_form
from .duality import (
    QuarticIsotropyField,
    FixedPointCase,
    dual_family_jets,
    dual_residual_check,
    fixed_point_set,
    gamma_orbit_check,
    lie_form_check,
    mobius_action_check,
    random_unimodular,
)
from .fields import plane_field
from .gauss import GaussRational, as_scalar
from .ode import OdeSpec, PointMap, make_shear_ode, pushforward
from .phi import (
    Branch,
    check_c0_identity,
    extract_ode,
    leading_coefficient,
    phi_residual,
    solve_phi,
    tune_c0,
)
from .poly import DEFAULT_TRUNCATION, TruncPoly, const, series, var
from .sl2 import (
    GroupActionGen,
    L_family_a,
    L_family_b,
    THETA,
    Z1,
    ZQ,
    action_generator,
    chart_map,
    chart_pushforward_check,
    is_tangent,
    sl2_bracket,
    weight_check,
)
from .symmetry import determining_residual, solve_polynomial_ansatz

__all__ = ["CriterionResult", "CRITERIA", "run_all", "random_scalar", "random_series"]


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: Dict[str, object] = field(default_factory=dict)
    seconds: float = 0.0
    limit_seconds: float = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.limit_seconds:g}s)" if self.limit_seconds else ""
        return f"[{status}] criterion {self.number}: {self.title} [{self.seconds:.2f}s{limit}]"


def random_scalar(rng: random.Random, complex_part: bool = True):
    """Small nonzero Gaussian rational."""
    while True:
        re = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        im = Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if complex_part and rng.random() < 0.5 else Fraction(0)
        z = as_scalar(GaussRational(re, im))
        if z:
            return z


def random_series(rng: random.Random, N: int) -> TruncPoly:
    coeffs = [random_scalar(rng) if rng.random() < 0.8 else 0 for _ in range(N + 1)]
    return series(coeffs, N)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        if res.limit_seconds is not None and res.seconds > res.limit_seconds:
            res.passed = False
            res.details["runtime_exceeded"] = True
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def criterion_1(seed: int = 42, N: int = DEFAULT_TRUNCATION, **_) -> CriterionResult:
    """The shear annihilates the determining residual of random normal forms."""
    rng = random.Random(seed)
    shear = plane_field(var("y"), 0)
    zeros = 0
    for _ in range(50):
        ode = make_shear_ode(random_series(rng, N), random_series(rng, N))
        if determining_residual(ode, shear).is_zero():
            zeros += 1
    return CriterionResult(1, "shear invariance on 50 random normal forms", zeros == 50, {"exact_zeros": zeros}, limit_seconds=5)


@_timed
def criterion_2(seed: int = 42, N: int = DEFAULT_TRUNCATION, **_) -> CriterionResult:
    """Classification of closed-form inputs."""
    rng = random.Random(seed)
    checks = {}
    checks["quadric"] = classify(const(0), const(0), N).label is Label.QUADRIC
    for k in (1, 2, 3):
        C1, c = random_scalar(rng), random_scalar(rng)
        r = classify(closed_form(C1, c, k, N), const(0), N)
        checks[f"family_a_k{k}"] = r.label is Label.FAMILY_A and r.k == k and r.c == c
    for ell in (0, 1, 2):
        C1, C2, c = random_scalar(rng), random_scalar(rng), random_scalar(rng)
        f0 = closed_form(C1, c, 2 * ell + 2, N)
        f1 = closed_form(C2, c, ell, N)
        r = classify(f0, f1, N)
        checks[f"family_b_l{ell}"] = (
            r.label is Label.FAMILY_B and r.ell == ell and r.C == as_scalar(C1 / (C2 * C2))
        )
    y = var("y")
    r = classify(y + y**3, const(1), N)
    checks["generic"] = r.label is Label.GENERIC and r.certified_order >= 16
    return CriterionResult(2, "classification of QUADRIC / FAMILY_A / FAMILY_B / GENERIC", all(checks.values()), checks)


@_timed
def criterion_3(**_) -> CriterionResult:
    """Polynomial-ansatz symmetry dimensions at degree (3, 3)."""
    y = var("y")
    cases = {
        "quartic": (make_shear_ode(1, 0), 3),
        "family_a_k1": (make_shear_ode(y, 0), 2),
        "family_a_k2": (make_shear_ode(y * y, 0), 2),
        "family_b_l0_C0": (make_shear_ode(0, 1), 2),
        "family_b_l0_C1": (make_shear_ode(y * y, 1), 2),
        "quadric": (OdeSpec(const(0)), 8),
    }
    details = {}
    ok = True
    for name, (ode, expected) in cases.items():
        basis = solve_polynomial_ansatz(ode, 3, 3)
        good = basis.dimension == expected and basis.structure.closed
        details[name] = {"dimension": basis.dimension, "expected": expected, "closed": basis.structure.closed}
        ok = ok and good
    return CriterionResult(3, "symmetry dimensions 3 / 2 / 8 with closed brackets", ok, details, limit_seconds=30)


@_timed
def criterion_4(**_) -> CriterionResult:
    """The SL(2) identities for indices 0..4."""
    checks = {}
    m = chart_map(1, 2, 1)
    checks["chart_det"] = m[0][0] * m[1][1] - m[0][1] * m[1][0] == 1
    checks["tangency"] = all(is_tangent(f) for f in (Z1(), ZQ(), THETA()))
    delta, gamma = var("delta"), var("gamma")
    for n in range(5):
        LA, LB = L_family_a(n), L_family_b(n)
        checks[f"n{n}"] = all(
            (
                is_tangent(LA),
                is_tangent(LB),
                sl2_bracket(LA, Z1()) == Z1().scale(n),
                sl2_bracket(LA, ZQ()) == ZQ().scale(-n),
                sl2_bracket(LB, Z1()) == Z1().scale(n + 1),
                sl2_bracket(LB, ZQ()) == ZQ().scale(-(n + 1)),
                weight_check(LA, delta**n) == -2 * n,
                weight_check(LB, gamma * delta**n) == -2 * (n + 1),
                weight_check(LB, delta ** (2 * n + 2)) == -2 * (n + 1),
            )
        )
    left = [action_generator(GroupActionGen("LEFT", g)) for g in (((0, 1), (0, 0)), ((0, 0), (1, 0)), ((1, 0), (0, -1)))]
    right = [action_generator(GroupActionGen("RIGHT", g)) for g in (((0, 1), (0, 0)), ((0, 0), (1, 0)), ((0, 1), (1, 0)))]
    checks["left_right_commute"] = all(sl2_bracket(u, w).is_zero() for u in left for w in right)
    checks["chart_quadric"] = chart_pushforward_check(OdeSpec(const(0))).ok
    checks["chart_quartic"] = chart_pushforward_check(make_shear_ode(1, 0)).ok
    return CriterionResult(4, "SL(2) chart, brackets, weights and commutation", all(checks.values()), checks)


@_timed
def criterion_5(N: int = DEFAULT_TRUNCATION, **_) -> CriterionResult:
    """Series solutions of the phi equation in both branches."""
    details = {}
    ok = True
    k, a = 2, -1
    for branch, free in ((Branch.TWO, None), (Branch.ONE, 0)):
        sol = solve_phi(branch, k, a, -1, 0, free, N)
        res = phi_residual(sol.phi, a)
        ode, extra = extract_ode(sol)
        sym = determining_residual(ode, extra)
        entry = {
            "phi_residual_zero": res.is_zero() and res.trunc >= 19,
            "symmetry_residual_zero": sym.is_zero() and sym.trunc >= 15,
            "resonances": list(sol.resonances),
        }
        if branch is Branch.ONE:
            # the only vanishing leading coefficient beyond the start is at j = 2k - 2
            zeros = [j for j in range(k, N - 1) if not leading_coefficient(j, a, sol.phi.coeff({}))]
            entry["resonance_detected"] = sol.resonances == (2 * k - 2,) and zeros == [2 * k - 2]
        ok = ok and all(v for key, v in entry.items() if key != "resonances")
        details[branch.value] = entry
    tuned = tune_c0(k, a, -1, 0, N)
    details["c0_identity"] = tuned.f0.is_zero() and check_c0_identity(tuned.f1, a)
    ok = ok and details["c0_identity"]
    return CriterionResult(5, "phi solver branches, resonance and the C=0 identity", ok, details, limit_seconds=20)


@_timed
def criterion_6(seed: int = 42, tolerance: float = 1e-9, **_) -> CriterionResult:
    """Dual equation, Lie form and coupled Moebius action."""
    jets = dual_family_jets(20, seed)
    dual = dual_residual_check(jets, tolerance, strict=False)
    lie = lie_form_check(jets, tolerance, strict=False)
    rng = random.Random(seed)
    mob = [mobius_action_check(random_unimodular(rng), tol=1e-8) for _ in range(10)]
    details = {
        "dual_max_residual": dual.max_residual,
        "lie_max_residual": lie.max_residual,
        "mobius_passed": sum(mob),
    }
    return CriterionResult(6, "dual ODE, Lie form and Moebius action", dual.ok and lie.ok and all(mob), details)


@_timed
def criterion_7(seed: int = 42, **_) -> CriterionResult:
    """Gamma orbit and the fixed-point case analysis."""
    rng = random.Random(seed)
    points = []
    while len(points) < 10:
        a, b, c, d = (random_scalar(rng, complex_part=False) for _ in range(4))
        if a * d - b * c:
            points.append((a, b, c, d))
    orbit = gamma_orbit_check(points)
    orbit_ok = all(r.ok and r.factor == (p[0] * p[3] - p[1] * p[2]) ** 2 for r, p in zip(orbit, points))
    cases_ok = True
    counts = {c.value: 0 for c in FixedPointCase}
    for i in range(30):
        kind = i % 3
        if kind == 0:
            al, be, de = (random_scalar(rng) for _ in range(3))
            if not al * al + be * de:
                continue
            expected = FixedPointCase.NONDEGENERATE
        elif kind == 1:
            al, be = random_scalar(rng), random_scalar(rng)
            de = as_scalar(-al * al / be)
            expected = FixedPointCase.DEGENERATE_BETA
        else:
            al, be, de = 0, 0, random_scalar(rng)
            expected = FixedPointCase.DEGENERATE_ZERO
        fps = fixed_point_set(QuarticIsotropyField(al, be, de))
        counts[fps.case.value] += 1
        good = fps.case is expected and fps.verified
        if expected is FixedPointCase.DEGENERATE_BETA:
            good = good and fps.on_gamma is True
        cases_ok = cases_ok and good
    details = {"orbit_points": len(points), "orbit_ok": orbit_ok, "fixed_point_cases": counts, "cases_ok": cases_ok}
    return CriterionResult(7, "Gamma orbit and fixed-point sets", orbit_ok and cases_ok, details)


@_timed
def criterion_8(seed: int = 42, N: int = DEFAULT_TRUNCATION, **_) -> CriterionResult:
    """Classification is unchanged by random projective maps."""
    rng = random.Random(seed)
    trials = []
    for t in range(20):
        c = random_scalar(rng)
        kind = t % 3
        if kind == 0:
            k = rng.randint(1, 3)
            f0, f1 = closed_form(random_scalar(rng), c, k, N), const(0)
        elif kind == 1:
            ell = rng.randint(0, 2)
            f0 = closed_form(random_scalar(rng), c, 2 * ell + 2, N)
            f1 = closed_form(random_scalar(rng), c, ell, N)
        else:
            f0, f1 = random_series(rng, N), random_series(rng, N)
        pmap = PointMap.projective(random_scalar(rng), random_scalar(rng), random_scalar(rng))
        before = classify(f0, f1, N)
        g0, g1 = pushforward(make_shear_ode(f0, f1), pmap, N).shear_data()
        after = classify(g0, g1, N)
        trials.append(
            before.label == after.label and before.k == after.k and before.ell == after.ell and before.C == after.C
        )
    return CriterionResult(8, "classification invariant under 20 random projective maps", all(trials), {"preserved": sum(trials), "trials": len(trials)})


CRITERIA: List[Callable[..., CriterionResult]] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
]


def run_all(seed: int = 42, N: int = DEFAULT_TRUNCATION, tolerance: float = 1e-9) -> List[CriterionResult]:
    return [crit(seed=seed, N=N, tolerance=tolerance) for crit in CRITERIA]
