"""The solution space as SL(2, C) and its distinguished vector fields.

Points ``(x, y, p)`` off the section ``y = x p`` are sent to the unimodular
matrix ``((1/u, x), (p/u, y))`` with ``u = y - x p``.  Fields live on the
ambient coordinates ``(alpha, beta, gamma, delta)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .errors import NotEigenvector, OnSection
from .fields import SL2, VectorField, lie_bracket
from .gauss import as_scalar
from .ode import OdeSpec, shear_factor
from .poly import TruncPoly, const, substitute, var

__all__ = [
    "Side",
    "GroupActionGen",
    "chart_map",
    "action_generator",
    "sl2_bracket",
    "weight_check",
    "is_tangent",
    "determinant_poly",
    "Z1",
    "ZQ",
    "THETA",
    "Z2",
    "cartan",
    "L_family_a",
    "L_family_b",
    "chart_pushforward_check",
    "ChartCheck",
]


def _v(name: str) -> TruncPoly:
    return var(name)


def sl2_field(a=0, b=0, c=0, d=0) -> VectorField:
    return VectorField(SL2, (a, b, c, d))


def determinant_poly() -> TruncPoly:
    return _v("alpha") * _v("delta") - _v("beta") * _v("gamma")


def chart_map(x, y, p) -> List[list]:
    """``((1/u, x), (p/u, y))`` with ``u = y - x p``; determinant 1."""
    x, y, p = as_scalar(x), as_scalar(y), as_scalar(p)
    u = as_scalar(y - x * p)
    if not u:
        raise OnSection("the point lies on the section y = x p")
    inv = as_scalar(1 / u)
    return [[inv, x], [as_scalar(p * inv), y]]


class Side(str, enum.Enum):
    LEFT = "LEFT"
    RIGHT = "RIGHT"


@dataclass(frozen=True)
class GroupActionGen:
    """Infinitesimal left (``G M``) or right (``M G``) multiplication."""

    side: Side
    generator: Tuple[Tuple[object, object], Tuple[object, object]]

    def __post_init__(self):
        object.__setattr__(self, "side", Side(self.side))
        g = tuple(tuple(as_scalar(v) for v in row) for row in self.generator)
        if len(g) != 2 or any(len(r) != 2 for r in g):
            raise ValueError("generator must be 2x2")
        object.__setattr__(self, "generator", g)


def action_generator(g: GroupActionGen) -> VectorField:
    M = [[_v("alpha"), _v("beta")], [_v("gamma"), _v("delta")]]
    G = g.generator
    if g.side is Side.LEFT:
        P = [[M[0][j].scale(G[i][0]) + M[1][j].scale(G[i][1]) for j in range(2)] for i in range(2)]
    else:
        P = [[M[i][0].scale(G[0][j]) + M[i][1].scale(G[1][j]) for j in range(2)] for i in range(2)]
    return sl2_field(P[0][0], P[0][1], P[1][0], P[1][1])


def sl2_bracket(v: VectorField, w: VectorField) -> VectorField:
    return lie_bracket(v, w)


def is_tangent(v: VectorField) -> bool:
    """``v(alpha delta - beta gamma) == 0``."""
    return v.apply(determinant_poly()).is_zero()


def weight_check(L: VectorField, F: TruncPoly):
    """Eigenvalue of ``L`` on ``F``; raises when ``F`` is not an eigenvector."""
    if F.is_zero():
        raise NotEigenvector("the zero function has no eigenvalue")
    LF = L.apply(F)
    e, c = next(iter(sorted(F.terms.items())))
    lam = as_scalar(LF.coeff(dict(zip(F.variables, e))) / c)
    if not (LF - F.scale(lam)).is_zero():
        raise NotEigenvector("L F is not a multiple of F")
    return lam


# ------------------------------------------------------------- named fields
def Z1() -> VectorField:
    """``beta d/dalpha + delta d/dgamma`` (right action of ((0,0),(1,0)))."""
    return sl2_field(a=_v("beta"), c=_v("delta"))


def ZQ() -> VectorField:
    """``alpha d/dbeta + gamma d/ddelta`` (right action of ((0,1),(0,0)))."""
    return sl2_field(b=_v("alpha"), d=_v("gamma"))


def THETA() -> VectorField:
    """The shear: ``gamma d/dalpha + delta d/dbeta``."""
    return sl2_field(a=_v("gamma"), b=_v("delta"))


def _in_delta(f: TruncPoly) -> TruncPoly:
    # stored coefficients only: a truncated series becomes its partial sum
    return substitute(f.exact(), {"y": _v("delta")})


def coefficient_F(f0: TruncPoly, f1: TruncPoly) -> TruncPoly:
    """``f0(delta) + gamma f1(delta)`` built from the stored coefficients."""
    return _in_delta(f0) + _v("gamma") * _in_delta(f1)


def Z2(f0, f1) -> VectorField:
    """``Z_Q + (f0(delta) + gamma f1(delta)) Z_1``."""
    f0 = f0 if isinstance(f0, TruncPoly) else const(f0)
    f1 = f1 if isinstance(f1, TruncPoly) else const(f1)
    return ZQ() + Z1().scale(coefficient_F(f0, f1))


def cartan() -> VectorField:
    """``[Z_1, Z_Q] = -alpha d/dalpha + beta d/dbeta - gamma d/dgamma + delta d/ddelta``."""
    return sl2_field(-_v("alpha"), _v("beta"), -_v("gamma"), _v("delta"))


def _diagonal(wa, wb, wc, wd) -> VectorField:
    return sl2_field(
        _v("alpha").scale(wa), _v("beta").scale(wb), _v("gamma").scale(wc), _v("delta").scale(wd)
    )


def L_family_a(k: int) -> VectorField:
    return _diagonal(2, k + 2, -(k + 2), -2)


def L_family_b(ell: int) -> VectorField:
    return _diagonal(1, ell + 2, -(ell + 2), -1)


# ----------------------------------------------------------- chart pushforward
class _URational:
    """``num / u**m`` with ``u = y - x p`` and ``num`` polynomial in (x, y, p)."""

    __slots__ = ("num", "m")

    def __init__(self, num, m: int = 0):
        self.num = num if isinstance(num, TruncPoly) else const(num)
        self.m = m

    def d(self, name: str) -> "_URational":
        u = shear_factor()
        num = self.num.partial(name) * u - self.num * u.partial(name).scale(self.m)
        return _URational(num, self.m + 1)

    def __add__(self, other):
        m = max(self.m, other.m)
        return _URational(self._lift(m) + other._lift(m), m)

    def __mul__(self, other):
        return _URational(self.num * other.num, self.m + other.m)

    def _lift(self, m: int) -> TruncPoly:
        return self.num * shear_factor() ** (m - self.m)

    def __eq__(self, other):
        m = max(self.m, other.m)
        return self._lift(m) == other._lift(m)


def _chart_components() -> Tuple[_URational, ...]:
    x, y, p = var("x"), var("y"), var("p")
    return _URational(1, 1), _URational(x), _URational(p, 1), _URational(y)


def _push(comps: Sequence[_URational], field: Sequence[_URational]) -> List[_URational]:
    """Components ``V(alpha), ..., V(delta)`` of ``V = sum field_i d/d(x, y, p)_i``."""
    out = []
    for c in comps:
        total = _URational(0)
        for name, coef in zip(("x", "y", "p"), field):
            total = total + coef * c.d(name)
        out.append(total)
    return out


def _on_chart(f: TruncPoly) -> _URational:
    """Express a polynomial in (alpha, beta, gamma, delta) on the chart."""
    out = _URational(0)
    x, y, p = var("x"), var("y"), var("p")
    for e, c in f.terms.items():
        ex = dict(zip(f.variables, e))
        ea, eb, ec, ed = (ex.get(n, 0) for n in SL2)
        num = x**eb * p**ec * y**ed
        out = out + _URational(num.scale(c), ea + ec)
    if f.trunc is not None:
        out = _URational(out.num.with_trunc(f.trunc), out.m)
    return out


@dataclass(frozen=True)
class ChartCheck:
    fibre_ok: bool
    fibre_factor: str
    flow_ok: bool
    flow_factor: str

    @property
    def ok(self) -> bool:
        return self.fibre_ok and self.flow_ok


def chart_pushforward_check(ode: OdeSpec) -> ChartCheck:
    """Compare the chart images of ``d/dp`` and ``d/dx + p d/dy + B d/dp``.

    ``d/dp`` must map to ``alpha^2 Z_1`` and the total derivative to
    ``(1/alpha) Z_2`` with ``F = f0(delta) + gamma f1(delta)``; both are
    checked as polynomial identities after clearing powers of ``u``.
    """
    f0, f1 = ode.shear_data()
    comps = _chart_components()
    zero, one = _URational(0), _URational(1)
    fibre = _push(comps, (zero, zero, one))
    a2z1 = (Z1().scale(_v("alpha") * _v("alpha"))).components
    fibre_ok = all(lhs == _on_chart(rhs) for lhs, rhs in zip(fibre, a2z1))

    flow = _push(comps, (one, _URational(var("p")), _URational(ode.B)))
    # F = f0(delta) + gamma f1(delta) on the chart, keeping the y-truncation
    u = shear_factor()
    F = _URational(f0 * u + var("p") * f1, 1)
    zq, z1 = ZQ().components, Z1().components
    flow_ok = all(
        lhs == _URational(u) * (_on_chart(q) + F * _on_chart(z))
        for lhs, q, z in zip(flow, zq, z1)
    )
    return ChartCheck(fibre_ok, "alpha^2", flow_ok, "1/alpha")
