from fractions import Fraction

import pytest

from shearode.errors import NonInvertible, ResonanceObstruction, ZeroLeading
from shearode.fields import plane_field
from shearode.gauss import GaussRational
from shearode.phi import (
    Branch,
    check_c0_identity,
    coefficient_equation,
    extract_ode,
    leading_coefficient,
    phi_residual,
    solve_phi,
    tune_c0,
)
from shearode.poly import const, series, var
from shearode.symmetry import determining_residual

y = var("y")
A = Fraction(-1)


def ff(n, m):
    """n!/m! with 1/(negative)! read as zero."""
    if m < 0:
        return 0
    out = 1
    for t in range(m + 1, n + 1):
        out *= t
    return out


def displayed_sum(c, a, j):
    """Coefficient of y^j as a literal transcription of the displayed triple sums."""
    def g(n):
        return c[n] if 0 <= n < len(c) else 0

    def sq(b):
        return sum((g(al) * g(b - al) for al in range(b + 1)), Fraction(0))

    t = Fraction(0)
    t += sum(ff(j - b + 2, j - b - 2) * sq(b) * g(j + 2 - b) for b in range(j - 1))
    t += 8 * sum(ff(j - b + 2, j - b - 1) * sq(b) * g(j + 2 - b) for b in range(j))
    t += 12 * sum(ff(j - b + 2, j - b) * sq(b) * g(j + 2 - b) for b in range(j + 1))
    t += 3 * a * sum(ff(j - b + 2, j - b - 1) * g(b) * g(j + 2 - b) for b in range(j))
    t += 10 * a * sum(ff(j - b + 2, j - b) * g(b) * g(j + 2 - b) for b in range(j + 1))
    t -= a * sum(ff(j - b + 1, j - b - 1) * (b + 1) * g(b + 1) * g(j + 1 - b) for b in range(j + 1))
    t += 2 * a * a * (j + 2) * (j + 1) * g(j + 2)
    return t


@pytest.mark.parametrize("j", range(0, 9))
def test_coefficient_equation_matches_displayed_sum(j):
    c = [Fraction(n * n - 3, n + 2) for n in range(14)]
    a = Fraction(5, 7)
    assert coefficient_equation(c, a, j) == displayed_sum(c, a, j)


def test_coefficient_equation_matches_residual_series():
    c = [Fraction(1, n + 1) for n in range(12)]
    a = Fraction(-3, 2)
    res = phi_residual(series(c, 11), a)
    for j in range(8):
        assert res.coeff({"y": j}) == coefficient_equation(c, a, j)


def test_leading_coefficient_from_equation():
    # the y^j equation is affine in phi_(j+2); its slope is the leading coefficient
    a, j = Fraction(2), 3
    c = [Fraction(1, 3), Fraction(1, 5), 0, 0, 1, 2, 0, 0, 0]
    lo = coefficient_equation(c, a, j)
    c[j + 2] += 1
    assert coefficient_equation(c, a, j) - lo == leading_coefficient(j, a, c[0])


def test_branch_two_example():
    sol = solve_phi(Branch.TWO, 2, A, -1, 0, N=16)
    assert sol.phi.coeff({}) == Fraction(1, 2)
    assert sol.phi.coeff({"y": 1}) == 0
    assert sol.f1.coeff({}) == 1
    assert sol.resonances == ()
    assert sol.ell == 0


@pytest.mark.parametrize("branch", list(Branch))
def test_solver_output_satisfies_equation(branch):
    sol = solve_phi(branch, 2, A, -1, 0, N=20)
    res = phi_residual(sol.phi, A)
    assert res.is_zero()
    assert res.trunc >= 16


def test_branch_one_resonance_at_2k_minus_2():
    for k in (2, 3, 4):
        sol = solve_phi(Branch.ONE, k, A, -1, 0, N=20)
        assert sol.resonances == (2 * k - 2,)
        assert f"phi_{2 * k}" in sol.free_params
        phi0 = -A / (k + 1)
        assert leading_coefficient(2 * k - 2, A, phi0) == 0


def test_phi_8_is_determined_for_k_2():
    phi0 = -A / 3
    assert leading_coefficient(6, A, phi0) != 0


def test_branch_two_has_no_resonance():
    for k in (2, 3, 4, 5):
        phi0 = -2 * A / (k + 2)
        assert all(leading_coefficient(j, A, phi0) for j in range(k, 40))


def test_free_coefficient_is_honoured():
    sol = solve_phi(Branch.ONE, 2, A, -1, 0, phi_free=Fraction(3), N=12)
    assert sol.phi.coeff({"y": 4}) == 3
    assert phi_residual(sol.phi, A).is_zero()


@pytest.mark.parametrize("k", [2, 3, 4, 5])
@pytest.mark.parametrize("phi_k1", [0, 1, Fraction(-2, 3)])
def test_resonance_is_always_compatible(k, phi_k1):
    # the forced part at the resonant order vanishes, so no obstruction arises
    sol = solve_phi(Branch.ONE, k, A, -1, phi_k1, N=16)
    c = sol.phi.coefficients()
    j = 2 * k - 2
    c[j + 2] = 0
    assert coefficient_equation(c, A, j) == 0


def test_obstruction_when_forced_part_is_nonzero(monkeypatch):
    import shearode.phi as phi_mod

    real = phi_mod.coefficient_equation

    def shifted(c, a, j):
        return real(c, a, j) + (1 if j == 2 else 0)

    monkeypatch.setattr(phi_mod, "coefficient_equation", shifted)
    with pytest.raises(ResonanceObstruction):
        solve_phi(Branch.ONE, 2, A, -1, 0, N=12)


def test_zero_leading():
    with pytest.raises(ZeroLeading):
        solve_phi(Branch.TWO, 2, A, 0, 0)


def test_affine_phi_has_zero_residual():
    assert phi_residual(1 + 3 * y, Fraction(7)).is_zero()


def test_perturbed_solution_has_nonzero_residual():
    sol = solve_phi(Branch.TWO, 2, A, -1, 0, N=16)
    bumped = sol.phi + y**6
    assert not phi_residual(bumped, A).is_zero()


def test_extra_symmetry_is_a_symmetry():
    sol = solve_phi(Branch.TWO, 2, A, -1, 0, N=16)
    ode, X = extract_ode(sol)
    res = determining_residual(ode, X)
    assert res.is_zero()
    assert res.trunc >= 12
    assert determining_residual(ode, plane_field(y, 0)).is_zero()


def test_wrong_a_breaks_the_symmetry():
    sol = solve_phi(Branch.TWO, 2, A, -1, 0, N=16)
    ode, _ = extract_ode(sol)
    x = var("x")
    wrong = plane_field(const(1) + (sol.phi + A + 1) * x, sol.phi * y)
    assert not determining_residual(ode, wrong).is_zero()


def test_complex_a():
    a = GaussRational(1, 1)
    sol = solve_phi(Branch.TWO, 3, a, 2, 0, N=14)
    assert phi_residual(sol.phi, a).is_zero()
    ode, X = extract_ode(sol)
    assert determining_residual(ode, X).is_zero()


@pytest.mark.parametrize("k", [2, 3, 4])
def test_c0_identity_on_tuned_solution(k):
    sol = tune_c0(k, N=20)
    assert sol.f0.is_zero()
    assert sol.branch is Branch.ONE
    assert check_c0_identity(sol.f1)


@pytest.mark.parametrize("a", [Fraction(-2), Fraction(3), GaussRational(1, 1)])
def test_c0_identity_general_a(a):
    sol = tune_c0(2, a=a, N=18)
    assert check_c0_identity(sol.f1, a)


def test_c0_identity_false_when_f0_nonzero():
    sol = solve_phi(Branch.TWO, 2, A, -1, 0, N=16)
    assert not sol.f0.is_zero()
    assert not check_c0_identity(sol.f1)


def test_c0_identity_rejects_zero():
    with pytest.raises(NonInvertible):
        check_c0_identity(const(0, 10))
