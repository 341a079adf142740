"""Second-order ODEs ``y'' = B(x, y, y')``, point maps and solution families.

``p`` stands for ``y'`` throughout.  A shear-invariant ODE is stored with
its pair ``(f0, f1)`` when built from it::

    B = f0(y) * (y - x p)**3 + f1(y) * p * (y - x p)**2
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    BranchFailure,
    DegreeOverflow,
    NormalFormRequired,
    SingularJet,
    SingularSample,
    ZeroConstantTerm,
)
from .gauss import as_scalar, to_gauss
from .poly import DEFAULT_TRUNCATION, TruncPoly, const, series_invert, substitute, var

__all__ = [
    "OdeSpec",
    "PointMap",
    "SolutionFamily",
    "make_shear_ode",
    "shear_factor",
    "pushforward",
    "scaling_action",
    "sample_solutions",
    "ode_residual_at",
    "QUARTIC_FAMILY",
    "LINE_FAMILY",
    "DUAL_FAMILY",
]


def shear_factor() -> TruncPoly:
    """``u = y - x p``."""
    return var("y") - var("x") * var("p")


def _as_series(f, trunc) -> TruncPoly:
    if isinstance(f, TruncPoly):
        return f
    return const(f, trunc)


@dataclass(frozen=True)
class OdeSpec:
    """``y'' = B(x, y, p)`` with ``B`` of degree at most 3 in ``x`` and ``p``."""

    B: TruncPoly
    meta: Optional[Tuple[TruncPoly, TruncPoly]] = None

    def __post_init__(self):
        B = self.B
        if not isinstance(B, TruncPoly):
            object.__setattr__(self, "B", _as_series(B, None))
            B = self.B
        extra = [v for v in B.free_vars() if v not in ("x", "y", "p")]
        if extra:
            raise ValueError(f"B may only depend on x, y, p; got {extra}")
        if B.degree("p") > 3 or B.degree("x") > 3:
            raise DegreeOverflow(
                f"B must be cubic at most in x and p (deg_x={B.degree('x')}, deg_p={B.degree('p')})"
            )

    @property
    def trunc(self):
        return self.B.trunc

    def shear_data(self) -> Tuple[TruncPoly, TruncPoly]:
        """Recover ``(f0, f1)`` from ``B``; raises if ``B`` is not in shear normal form."""
        if self.meta is not None:
            return self.meta
        B = self.B
        f0 = -_coeff_xp(B, 3, 3)
        f1 = _coeff_xp(B, 2, 3)
        rebuilt = make_shear_ode(f0, f1).B
        if rebuilt != B:
            raise NormalFormRequired("B is not of the form f0(y)(y-xp)^3 + f1(y) p (y-xp)^2")
        return f0, f1

    def is_shear_normal(self) -> bool:
        try:
            self.shear_data()
        except NormalFormRequired:
            return False
        return True

    def __eq__(self, other):
        if not isinstance(other, OdeSpec):
            return NotImplemented
        return self.B == other.B

    __hash__ = None


def _coeff_xp(B: TruncPoly, dx: int, dp: int) -> TruncPoly:
    """Coefficient of ``x**dx * p**dp`` as a polynomial in ``y``."""
    return B.collect("x").get(dx, TruncPoly({}, (), B.series_var, B.trunc)).collect("p").get(
        dp, TruncPoly({}, (), B.series_var, B.trunc)
    )


def make_shear_ode(f0, f1) -> OdeSpec:
    """The ODE ``y'' = f0(y)(y-xy')^3 + f1(y) y'(y-xy')^2``."""
    f0 = _as_series(f0, None)
    f1 = _as_series(f1, None)
    for f in (f0, f1):
        if any(v != "y" for v in f.free_vars()):
            raise ValueError("f0 and f1 must be univariate in y")
    u = shear_factor()
    u2 = u * u
    B = f0 * u2 * u + f1 * var("p") * u2
    return OdeSpec(B, (f0, f1))


# ---------------------------------------------------------------------- maps
@dataclass(frozen=True)
class PointMap:
    """A point transformation, written as old coordinates in terms of new ones.

    ``affine``:      ``(x, y) = (a X + c Y + e, b X + d Y + f)``
    ``projective``:  ``(x, y) = (c1 X / (1 - c Y), c2 Y / (1 - c Y))``
    """

    kind: str
    params: Tuple

    def __post_init__(self):
        params = tuple(as_scalar(v) for v in self.params)
        object.__setattr__(self, "params", params)
        if self.kind == "affine":
            if len(params) != 6:
                raise ValueError("affine map needs (a, b, c, d, e, f)")
            a, b, c, d, _, _ = params
            if not (a * d - b * c):
                raise ValueError("affine map is degenerate: ad - bc = 0")
        elif self.kind == "projective":
            if len(params) != 3:
                raise ValueError("projective map needs (c, c1, c2)")
            _, c1, c2 = params
            if not (c1 * c2):
                raise ValueError("projective map is degenerate: c1*c2 = 0")
        else:
            raise ValueError(f"unknown map kind {self.kind!r}")

    @classmethod
    def affine(cls, a, b, c, d, e=0, f=0):
        return cls("affine", (a, b, c, d, e, f))

    @classmethod
    def projective(cls, c, c1, c2):
        return cls("projective", (c, c1, c2))

    @classmethod
    def identity(cls):
        return cls.affine(1, 0, 0, 1)

    @property
    def determinant(self):
        if self.kind == "affine":
            a, b, c, d, _, _ = self.params
            return as_scalar(a * d - b * c)
        _, c1, c2 = self.params
        return as_scalar(c1 * c2)

    def components(self, N: Optional[int]) -> Tuple[TruncPoly, TruncPoly]:
        """``(T1, T2)`` as polynomials/series in the new coordinates ``(x, y)``."""
        X, Y = var("x"), var("y")
        if self.kind == "affine":
            a, b, c, d, e, f = self.params
            return X * a + Y * c + e, X * b + Y * d + f
        c, c1, c2 = self.params
        N = DEFAULT_TRUNCATION if N is None else N
        g = series_invert(1 - var("y", N) * c, N)
        return X * g * c1, Y * g * c2

    def compose(self, inner: "PointMap") -> "PointMap":
        """The map ``self(inner(.))``: substituting ``self`` first, then ``inner``."""
        if self.kind != "affine" or inner.kind != "affine":
            raise ValueError("composition is implemented for affine maps")
        a1, b1, c1, d1, e1, f1 = self.params
        a2, b2, c2, d2, e2, f2 = inner.params
        # x = a1 x' + c1 y' + e1 with x' = a2 X + c2 Y + e2, y' = b2 X + d2 Y + f2
        return PointMap.affine(
            a1 * a2 + c1 * b2,
            b1 * a2 + d1 * b2,
            a1 * c2 + c1 * d2,
            b1 * c2 + d1 * d2,
            a1 * e2 + c1 * f2 + e1,
            b1 * e2 + d1 * f2 + f1,
        )


def _total(F: TruncPoly) -> TruncPoly:
    """Truncated total derivative ``F_x + p F_y`` (no ``p'`` term)."""
    return F.partial("x") + var("p") * F.partial("y")


def pushforward(ode: OdeSpec, pmap: PointMap, N: Optional[int] = None, method: str = "direct") -> OdeSpec:
    """Rewrite ``ode`` in the new coordinates of ``pmap``.

    With ``x = T1(X, Y)``, ``y = T2(X, Y)``, ``U = D T1``, ``V = D T2`` and
    Jacobian ``J``, the transformed right-hand side is::

        (sum_j B_j(T1, T2) V**j U**(3-j) - (D V * U - V * D U)) / J

    which is polynomial in ``P`` because ``B`` is cubic in ``p``.  ``method``
    ``"interpolate"`` instead evaluates the quotient form at a 4x4 grid of
    rational ``(X, P)`` and interpolates, checking one extra point.
    """
    if N is None:
        N = ode.trunc if ode.trunc is not None else DEFAULT_TRUNCATION
    if method == "interpolate":
        return _pushforward_grid(ode, pmap, N)
    if method != "direct":
        raise ValueError(f"unknown pushforward method {method!r}")
    if ode.trunc is None and pmap.kind == "affine":
        N = None
    # two spare orders: the formula differentiates the map twice in y
    T1, T2 = pmap.components(None if N is None else N + 2)
    U = _total(T1)
    V = _total(T2)
    J = T1.partial("x") * T2.partial("y") - T1.partial("y") * T2.partial("x")
    Jinv = _unit_inverse(J, N if N is not None else DEFAULT_TRUNCATION)

    pieces = ode.B.collect("p")
    Upow = [const(1)]
    Vpow = [const(1)]
    for _ in range(3):
        Upow.append(Upow[-1] * U)
        Vpow.append(Vpow[-1] * V)
    lifted = TruncPoly({}, (), "y", N)
    for j, Bj in pieces.items():
        Bj_new = substitute(Bj, {"x": T1, "y": T2}, N)
        lifted = lifted + Bj_new * Vpow[j] * Upow[3 - j]
    inhom = _total(V) * U - V * _total(U)
    Bt = (lifted - inhom) * Jinv
    if Bt.degree("x") > 3 or Bt.degree("p") > 3:
        raise DegreeOverflow("transformed ODE is not cubic in x and p")
    result = OdeSpec(Bt)
    if ode.meta is not None:
        try:
            result = OdeSpec(Bt, result.shear_data())
        except NormalFormRequired:
            pass
    return result


def _unit_inverse(J: TruncPoly, N: int) -> TruncPoly:
    if any(v != "y" for v in J.free_vars()):
        raise SingularSample("Jacobian of the map depends on x; not a unit series")
    try:
        if "y" in J.free_vars():
            return series_invert(J, N)
        return const(1 / to_gauss(J.coeff({})))
    except (ZeroConstantTerm, ZeroDivisionError) as exc:
        raise SingularSample("Jacobian of the map vanishes at the origin") from exc


def _lagrange(nodes: Sequence[Fraction], i: int, name: str) -> TruncPoly:
    out = const(1)
    for j, t in enumerate(nodes):
        if j != i:
            out = out * (var(name) - t) * (Fraction(1) / (nodes[i] - t))
    return out


def _grid_value(ode: OdeSpec, T1, T2, X0, P0, N) -> TruncPoly:
    """``Y''`` at ``X = X0, P = P0`` as a series in ``Y``, via ``p = V/U``."""
    at = {"x": X0, "p": P0}
    t1, t2 = T1.substitute({"x": X0}, N), T2.substitute({"x": X0}, N)
    U = _total(T1).substitute(at, N)
    V = _total(T2).substitute(at, N)
    DU = _total(_total(T1)).substitute(at, N)
    DV = _total(_total(T2)).substitute(at, N)
    J = (T1.partial("x") * T2.partial("y") - T1.partial("y") * T2.partial("x")).substitute({"x": X0}, N)
    Uinv = series_invert(U, N)
    pval = V * Uinv
    rhs = substitute(ode.B, {"x": t1, "y": t2, "p": pval}, N)
    # y'' = (DV U - V DU + P'' J) / U^3  =>  P'' = (rhs U^3 - DV U + V DU) / J
    return (rhs * U * U * U - DV * U + V * DU) * series_invert(J, N)


def _pushforward_grid(ode: OdeSpec, pmap: PointMap, N: int) -> OdeSpec:
    T1, T2 = pmap.components(N + 2)
    for shift in range(0, 12):
        nodes = [Fraction(shift + k) for k in range(4)]
        check = (Fraction(shift) + Fraction(1, 2), Fraction(shift) + Fraction(5, 3))
        try:
            values = {
                (i, j): _grid_value(ode, T1, T2, xi, pj, N)
                for (i, xi), (j, pj) in itertools.product(enumerate(nodes), enumerate(nodes))
            }
            probe = _grid_value(ode, T1, T2, check[0], check[1], N)
        except ZeroConstantTerm:
            continue
        Lx = [_lagrange(nodes, i, "x") for i in range(4)]
        Lp = [_lagrange(nodes, j, "p") for j in range(4)]
        Bt = TruncPoly({}, (), "y", N)
        for (i, j), val in values.items():
            Bt = Bt + val * Lx[i] * Lp[j]
        if Bt.substitute({"x": check[0], "p": check[1]}, N) != probe:
            raise DegreeOverflow("transformed ODE is not cubic in x and p")
        result = OdeSpec(Bt)
        if ode.meta is not None and result.is_shear_normal():
            result = OdeSpec(Bt, result.shear_data())
        return result
    raise SingularSample("every candidate grid hit a non-invertible denominator")


def scaling_action(f0: TruncPoly, f1: TruncPoly, lam, mu) -> Tuple[TruncPoly, TruncPoly]:
    """Closed form of the diagonal map ``(x, y) = (lam X, mu Y)`` on ``(f0, f1)``."""
    lam, mu = as_scalar(lam), as_scalar(mu)
    if not (lam * mu):
        raise ValueError("scaling needs lam*mu != 0")
    ymu = var("y") * mu
    g0 = substitute(f0, {"y": ymu}) * (lam * lam * mu * mu)
    g1 = substitute(f1, {"y": ymu}) * (lam * mu * mu)
    return g0, g1


# ------------------------------------------------------------------ families
@dataclass(frozen=True)
class SolutionFamily:
    """Implicit two-parameter family ``F(x, y, c1v, c2v) = 0``."""

    F: TruncPoly
    name: str = ""

    def __post_init__(self):
        if self.F.is_zero() or self.F.partial("y").is_zero():
            raise ValueError("family needs F != 0 and dF/dy != 0")


def _family(expr: str, name: str) -> SolutionFamily:
    from .parser import parse_poly

    return SolutionFamily(parse_poly(expr, variables=("x", "y", "c1v", "c2v")), name)


QUARTIC_FAMILY = _family("(y - c1v*x)^2 - c2v^2*x^2 - c2v", "quartic")
LINE_FAMILY = _family("y - c1v*x", "lines")
DUAL_FAMILY = _family("(x - c1v)^2 - (y - c2v)^2 - c1v^2", "dual")


def _numeric_roots(F: TruncPoly, x0, c1, c2) -> np.ndarray:
    pieces = F.collect("y")
    deg = max(pieces)
    coeffs = np.zeros(deg + 1, dtype=complex)
    env = {"x": complex(x0), "c1v": complex(c1), "c2v": complex(c2)}
    for k, piece in pieces.items():
        coeffs[deg - k] = complex(piece.evaluate(env))
    while len(coeffs) > 1 and coeffs[0] == 0:
        coeffs = coeffs[1:]
    return np.roots(coeffs)


def sample_solutions(
    fam: SolutionFamily,
    params: Iterable[Tuple],
    x0: Iterable,
    branch: int = 0,
    tol: float = 1e-13,
    allow_complex: bool = False,
) -> List[Tuple[complex, complex, complex, complex]]:
    """Numeric 2-jets ``(x, y, y', y'')`` on members of ``fam``.

    ``y`` is a root of ``F(x, ., c1, c2)`` (companion-matrix roots polished by
    Newton); ``branch`` indexes the admissible roots sorted by real part.
    Derivatives come from implicit differentiation of ``F``.
    """
    F = fam.F
    Fx, Fy = F.partial("x"), F.partial("y")
    Fxx, Fxy, Fyy = Fx.partial("x"), Fx.partial("y"), Fy.partial("y")
    jets = []
    for (c1, c2), x in zip(params, x0):
        env = {"x": complex(x), "c1v": complex(c1), "c2v": complex(c2)}
        candidates = []
        for r in _numeric_roots(F, x, c1, c2):
            y = complex(r)
            for _ in range(50):
                env["y"] = y
                fy = Fy.evaluate(env)
                if fy == 0:
                    break
                step = F.evaluate(env) / fy
                y -= step
                if abs(step) <= tol * max(1.0, abs(y)):
                    break
            env["y"] = y
            scale = max(1.0, abs(y), abs(complex(x))) ** max(F.degree(), 1)
            if abs(F.evaluate(env)) > 1e-9 * scale:
                continue
            if not allow_complex and abs(y.imag) > 1e-9 * max(1.0, abs(y)):
                continue
            if not allow_complex:
                y = complex(y.real, 0.0)
            candidates.append(y)
        candidates.sort(key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        if branch >= len(candidates):
            raise BranchFailure(f"no root for branch {branch} at x={x}, params=({c1}, {c2})")
        y = candidates[branch]
        env["y"] = y
        fy = Fy.evaluate(env)
        if abs(fy) < 1e-12:
            raise SingularJet(f"dF/dy vanishes at x={x}, y={y}")
        yp = -Fx.evaluate(env) / fy
        ypp = -(Fxx.evaluate(env) + 2 * Fxy.evaluate(env) * yp + Fyy.evaluate(env) * yp * yp) / fy
        jets.append((complex(x), y, yp, ypp))
    return jets


def ode_residual_at(ode: OdeSpec, jet: Sequence) -> complex:
    """``y'' - B(x, y, y')`` in floating point."""
    x, y, p, ypp = jet
    return complex(ypp) - ode.B.exact().evaluate({"x": complex(x), "y": complex(y), "p": complex(p)})
