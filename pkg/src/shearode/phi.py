"""Series solutions of the fourth-order equation for ``phi``.

An ODE in shear normal form has the extra symmetry
``(1 + (phi + a) x) d/dx + phi y d/dy`` exactly when ``phi(y)`` solves::

    (y^2 phi'''' + 8 y phi''' + 12 phi'') phi^2
        + a (3 y phi''' phi + 10 phi'' phi - y phi'' phi') + 2 a^2 phi'' = 0

and then ``f1 = -phi''/2``, ``f0 = -(y phi''' + 3 phi'') phi / 6 - a phi'' / 6``.

The coefficient of ``y^j`` is linear in ``phi_(j+2)`` with coefficient
``(j+1)(j+2)(a + (j+3) phi_0)(2a + (j+4) phi_0)``.  With ``phi_k`` the first
nonzero coefficient beyond ``phi_1`` the order ``k-2`` equation fixes
``phi_0`` (two branches) and the order ``k-1`` equation fixes ``phi_1``.
Branch ONE (``a + (k+1) phi_0 = 0``) has one more zero of the leading
coefficient, at order ``j = 2k-2``, where ``phi_(2k)`` is free.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple

from .errors import NonInvertible, ResonanceObstruction, ZeroLeading
from .fields import VectorField, plane_field
from .gauss import as_scalar
from .ode import OdeSpec, make_shear_ode
from .poly import DEFAULT_TRUNCATION, TruncPoly, const, series, series_invert, var

__all__ = [
    "Branch",
    "PhiSolution",
    "solve_phi",
    "phi_residual",
    "coefficient_equation",
    "leading_coefficient",
    "extract_ode",
    "extra_symmetry",
    "check_c0_identity",
    "tune_c0",
]


class Branch(str, enum.Enum):
    ONE = "ONE"
    TWO = "TWO"


@dataclass(frozen=True)
class PhiSolution:
    phi: TruncPoly
    branch: Branch
    k: int
    a: object
    free_params: dict
    f0: TruncPoly
    f1: TruncPoly
    resonances: Tuple[int, ...] = ()
    # order of f1 (the family exponent); kept next to k so the two are never confused
    ell: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "ell", self.k - 2)

    @property
    def coefficients(self) -> list:
        return self.phi.coefficients()

    def ode(self) -> OdeSpec:
        return make_shear_ode(self.f0, self.f1)


def leading_coefficient(j: int, a, phi0):
    """Coefficient of ``phi_(j+2)`` in the order-``j`` equation."""
    return as_scalar((j + 2) * (j + 1) * (a + (j + 3) * phi0) * (2 * a + (j + 4) * phi0))


def coefficient_equation(c: list, a, j: int):
    """Coefficient of ``y^j`` in the left-hand side, from the list ``c`` of ``phi_n``.

    Entries beyond the list count as zero.
    """
    def g(n):
        return c[n] if 0 <= n < len(c) else 0

    total = Fraction(0)
    # phi^2 coefficients up to j
    sq = [sum((g(i) * g(m - i) for i in range(m + 1)), Fraction(0)) for m in range(j + 1)]
    for m in range(j + 1):
        pm = g(m + 2)
        if pm:
            total += (m + 1) * (m + 2) * (m + 3) * (m + 4) * pm * sq[j - m]
            total += a * (m + 2) * (m + 1) * (3 * m + 10) * pm * g(j - m)
    # y phi'' phi': n(n-1) phi_n y^(n-1) times (r+1) phi_(r+1) y^r with n - 1 + r = j
    for n in range(2, j + 2):
        total -= a * n * (n - 1) * g(n) * (j - n + 2) * g(j - n + 2)
    total += 2 * a * a * (j + 2) * (j + 1) * g(j + 2)
    return as_scalar(total)


def _branch_start(branch: Branch, k: int, a, phi_k, phi_k1):
    if branch is Branch.ONE:
        phi0 = as_scalar(Fraction(-1, k + 1) * a)
        phi1 = as_scalar(a * phi_k1 / ((k - 1) * (k + 1) * phi_k))
    else:
        phi0 = as_scalar(Fraction(-2, k + 2) * a)
        phi1 = as_scalar(2 * a * phi_k1 / ((k - 1) * phi_k))
    return phi0, phi1


def solve_phi(
    branch,
    k: int,
    a,
    phi_k,
    phi_k1,
    phi_free=None,
    N: int = DEFAULT_TRUNCATION,
) -> PhiSolution:
    """Solve order by order through ``y^N``.

    ``phi_free`` is the value given to ``phi_(2k)`` at the resonance of
    branch ONE (default 0); it is ignored for branch TWO, which has none.
    """
    branch = Branch(branch)
    a, phi_k, phi_k1 = as_scalar(a), as_scalar(phi_k), as_scalar(phi_k1)
    if k < 2:
        raise ValueError("k must be at least 2")
    if not a:
        raise ValueError("a must be nonzero")
    if not phi_k:
        raise ZeroLeading("phi_k must be nonzero")
    phi0, phi1 = _branch_start(branch, k, a, phi_k, phi_k1)
    c = [Fraction(0)] * (N + 1)
    c[0], c[1] = phi0, phi1
    if k <= N:
        c[k] = phi_k
    if k + 1 <= N:
        c[k + 1] = phi_k1
    for j in (k - 2, k - 1):
        if coefficient_equation(c, a, j):
            raise ResonanceObstruction(f"initial order {j} equation is not satisfied")
    resonances = []
    free = {f"phi_{k}": phi_k, f"phi_{k + 1}": phi_k1}
    for j in range(k, N - 1):
        L = leading_coefficient(j, a, phi0)
        c[j + 2] = Fraction(0)
        R0 = coefficient_equation(c, a, j)
        if L:
            c[j + 2] = as_scalar(-R0 / L)
            continue
        if R0:
            raise ResonanceObstruction(f"order {j} is resonant but its forced part {R0} is nonzero")
        value = as_scalar(phi_free if phi_free is not None else 0)
        c[j + 2] = value
        free[f"phi_{j + 2}"] = value
        resonances.append(j)
    phi = series(c, N)
    f0, f1 = _coefficient_pair(phi, a)
    return PhiSolution(phi, branch, k, a, free, f0, f1, tuple(resonances))


def _coefficient_pair(phi: TruncPoly, a) -> Tuple[TruncPoly, TruncPoly]:
    y = var("y")
    d2 = phi.diff("y", 2)
    d3 = phi.diff("y", 3)
    f1 = d2.scale(Fraction(-1, 2))
    f0 = (y * d3 + d2.scale(3)) * phi * Fraction(-1, 6) - d2.scale(as_scalar(a) / 6)
    return f0, f1


def phi_residual(phi: TruncPoly, a) -> TruncPoly:
    """Left-hand side of the fourth-order equation, by direct differentiation."""
    a = as_scalar(a)
    y = var("y")
    d1, d2, d3, d4 = (phi.diff("y", n) for n in (1, 2, 3, 4))
    out = (y * y * d4 + (y * d3).scale(8) + d2.scale(12)) * phi * phi
    out = out + ((y * d3 * phi).scale(3) + (d2 * phi).scale(10) - y * d2 * d1).scale(a)
    return out + d2.scale(2 * a * a)


def extra_symmetry(sol: PhiSolution) -> VectorField:
    """``(1 + (phi + a) x) d/dx + phi y d/dy``."""
    x, y = var("x"), var("y")
    return plane_field(const(1) + (sol.phi + sol.a) * x, sol.phi * y)


def extract_ode(sol: PhiSolution) -> Tuple[OdeSpec, VectorField]:
    return sol.ode(), extra_symmetry(sol)


def check_c0_identity(f1: TruncPoly, a=-1) -> bool:
    """Whether ``(f1 / (3 f1 + y f1'))'' == (2/a) f1`` up to the known order.

    With the normalization ``a = -1`` this reads ``(...)'' = -2 f1``.  The
    leading power of ``y`` is cancelled before dividing.
    """
    if f1.is_zero():
        raise NonInvertible("f1 vanishes; the quotient is undefined")
    a = as_scalar(a)
    y = var("y")
    m = f1.order()
    den = f1.scale(3) + y * f1.partial("y")
    N = den.trunc if den.trunc is not None else DEFAULT_TRUNCATION
    num_u = _shift_down(f1, m)
    den_u = _shift_down(den, m)
    if not den_u.coeff({}):
        raise NonInvertible("3 f1 + y f1' has higher order than f1")
    q = num_u * series_invert(den_u, N - m)
    lhs = q.diff("y", 2)
    rhs = f1.scale(2 / a)
    diff = lhs - rhs
    return diff.with_trunc(lhs.trunc).is_zero()


def _shift_down(f: TruncPoly, m: int) -> TruncPoly:
    """``f / y^m`` for ``f`` divisible by ``y^m``."""
    coeffs = f.coefficients()
    trunc = None if f.trunc is None else f.trunc - m
    return series(coeffs[m:], trunc)


def tune_c0(k: int, a=-1, phi_k=-1, phi_k1=0, N: int = DEFAULT_TRUNCATION) -> PhiSolution:
    """Branch ONE solution whose free coefficient makes ``f0`` vanish.

    The first coefficient of ``f0`` that depends on ``phi_(2k)`` is affine in
    it; two trial solves determine the root, which is then checked on all
    known orders.
    """
    s0 = solve_phi(Branch.ONE, k, a, phi_k, phi_k1, 0, N)
    s1 = solve_phi(Branch.ONE, k, a, phi_k, phi_k1, 1, N)
    c0, c1 = s0.f0.coefficients(), s1.f0.coefficients()
    for n, (u, v) in enumerate(zip(c0, c1)):
        if u != v:
            t = as_scalar(-u / (v - u))
            sol = solve_phi(Branch.ONE, k, a, phi_k, phi_k1, t, N)
            if not sol.f0.is_zero():
                raise ResonanceObstruction("no value of the free coefficient makes f0 vanish")
            return sol
    if s0.f0.is_zero():
        return s0
    raise ResonanceObstruction("f0 does not depend on the free coefficient")
