"""Point symmetries of ``y'' = B(x, y, p)``: determining equation and solvers.

A plane field ``v = xi d/dx + eta d/dy`` is a symmetry when::

    xi B_x + eta B_y + phi B_p + (2 xi_x + 3 p xi_y - eta_y) B
        - eta_xx + p (xi_xx - 2 eta_xy) + p^2 (2 xi_xy - eta_yy) + p^3 xi_yy = 0

with ``phi`` the first-prolongation coefficient.  For series inputs the left
side is only known modulo a power of ``y``; every solver reports the order
it certifies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NormalFormRequired, TruncationTooLow
from .fields import PLANE, VectorField, lie_bracket, plane_field, prolong
from .gauss import as_scalar
from .linalg import exact_nullspace, solve_linear
from .ode import OdeSpec
from .poly import TruncPoly, const, var

__all__ = [
    "SymmetryBasis",
    "StructureTable",
    "determining_residual",
    "solve_isotropic",
    "solve_polynomial_ansatz",
    "structure_constants",
    "in_span",
]

ISOTROPIC_PARAMS = ("a", "beta1", "alpha3", "psi1")


def determining_residual(ode: OdeSpec, v: VectorField) -> TruncPoly:
    """Left-hand side of the linearized symmetry condition for ``v``."""
    xi, eta = v["x"], v["y"]
    B = ode.B
    p = var("p")
    phi = prolong(v)["p"]
    xi_x, xi_y = xi.partial("x"), xi.partial("y")
    eta_x, eta_y = eta.partial("x"), eta.partial("y")
    out = xi * B.partial("x") + eta * B.partial("y") + phi * B.partial("p")
    out = out + (xi_x.scale(2) + p * xi_y.scale(3) - eta_y) * B
    out = out - eta_x.partial("x")
    out = out + p * (xi_x.partial("x") - eta_x.partial("y").scale(2))
    out = out + p * p * (xi_x.partial("y").scale(2) - eta_y.partial("y"))
    out = out + p * p * p * xi_y.partial("y")
    return out


@dataclass(frozen=True)
class StructureTable:
    """``[g_i, g_j] = sum_k constants[i][j][k] g_k`` when ``closed``."""

    constants: List[List[List[object]]]
    closed: bool
    killing: Optional[List[List[object]]] = None

    def killing_determinant(self):
        if self.killing is None:
            return None
        return _det(self.killing)


@dataclass(frozen=True)
class SymmetryBasis:
    """Independent symmetry generators with the ansatz coefficients they came from."""

    generators: List[VectorField]
    parameters: List[Dict[str, object]]
    certified_order: Optional[int]
    structure: Optional[StructureTable] = field(default=None, compare=False)

    @property
    def dimension(self) -> int:
        return len(self.generators)

    @property
    def structure_constants(self):
        return None if self.structure is None else self.structure.constants

    def contains(self, v: VectorField) -> bool:
        return in_span(v, self.generators)


# ------------------------------------------------------------- linear algebra
def _monomial_rows(polys: Sequence[TruncPoly], cap: Optional[int]) -> Tuple[list, list]:
    """Coefficient matrix whose columns are ``polys`` and rows are monomials."""
    keys = {}
    for poly in polys:
        for e, c in _terms_by_name(poly, cap).items():
            keys.setdefault(e, None)
    order = sorted(keys)
    index = {k: i for i, k in enumerate(order)}
    M = [[Fraction(0)] * len(polys) for _ in order]
    for j, poly in enumerate(polys):
        for e, c in _terms_by_name(poly, cap).items():
            M[index[e]][j] = c
    return M, order


def _terms_by_name(poly: TruncPoly, cap: Optional[int]) -> Dict[tuple, object]:
    sv = poly.series_var or "y"
    out = {}
    for e, c in poly.terms.items():
        mono = tuple(sorted((v, k) for v, k in zip(poly.variables, e) if k))
        if cap is not None and dict(mono).get(sv, 0) > cap:
            continue
        out[mono] = c
    return out


def _field_polys(v: VectorField) -> List[TruncPoly]:
    return list(v.components)


def _flatten(v: VectorField, cap: Optional[int]) -> Dict[tuple, object]:
    out = {}
    for i, comp in enumerate(v.components):
        for mono, c in _terms_by_name(comp, cap).items():
            out[(i, mono)] = c
    return out


def _common_trunc(fields: Sequence[VectorField]) -> Optional[int]:
    known = [f.trunc for f in fields if f.trunc is not None]
    return min(known) if known else None


def in_span(v: VectorField, gens: Sequence[VectorField]) -> bool:
    """Whether ``v`` is a constant-coefficient combination of ``gens``."""
    return _express(v, gens) is not None


def _express(v: VectorField, gens: Sequence[VectorField], cap: Optional[int] = None):
    if cap is None:
        cap = _common_trunc(list(gens) + [v])
    flat = [_flatten(g, cap) for g in gens]
    target = _flatten(v, cap)
    keys = sorted(set(target).union(*flat) if flat else set(target))
    if not gens:
        return [] if not target else None
    M = [[f.get(k, Fraction(0)) for f in flat] for k in keys]
    b = [target.get(k, Fraction(0)) for k in keys]
    if not keys:
        return [Fraction(0)] * len(gens)
    return solve_linear(M, b)


def _det(M):

    n = len(M)
    if n == 0:
        return Fraction(1)
    A = [[as_scalar(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = as_scalar(det * A[c][c])
        inv = 1 / A[c][c]
        for r in range(c + 1, n):
            f = as_scalar(A[r][c] * inv)
            if f:
                A[r] = [as_scalar(a - f * b) for a, b in zip(A[r], A[c])]
    return det


# -------------------------------------------------------------------- solvers
def _solve(ode: OdeSpec, candidates: Sequence[VectorField], labels: Sequence[str]):
    residuals = [determining_residual(ode, v) for v in candidates]
    cap = None
    known = [r.trunc for r in residuals if r.trunc is not None]
    if known:
        cap = min(known)
    M, _ = _monomial_rows(residuals, cap)
    basis = exact_nullspace(M, len(candidates))
    gens, params = [], []
    for vec in basis:
        g = VectorField(PLANE, (const(0), const(0)))
        for c, cand in zip(vec, candidates):
            if c:
                g = g + cand.scale(c)
        gens.append(g)
        params.append({name: as_scalar(c) for name, c in zip(labels, vec)})
    return gens, params, cap


def solve_isotropic(ode: OdeSpec) -> SymmetryBasis:
    """Symmetries ``((a + beta1 + alpha3 y) x + psi1 y, (beta1 + alpha3 y) y)``.

    These are the fields fixing the origin that the shear normal form can
    carry; ``psi1`` is the shear itself.
    """
    if not ode.is_shear_normal():
        raise NormalFormRequired("the isotropic ansatz needs an ODE in shear normal form")
    x, y = var("x"), var("y")
    candidates = [
        plane_field(x, const(0)),
        plane_field(x, y),
        plane_field(x * y, y * y),
        plane_field(y, const(0)),
    ]
    gens, params, cap = _solve(ode, candidates, ISOTROPIC_PARAMS)
    basis = SymmetryBasis(gens, params, cap)
    return _with_structure(basis)


def _ansatz_monomials(degx: int, degy: int) -> List[Tuple[int, int]]:
    mons = [(i, j) for i in range(degx + 1) for j in range(degy + 1)]
    # graded order, x before y within a degree
    return sorted(mons, key=lambda m: (m[0] + m[1], -m[0]))


def solve_polynomial_ansatz(ode: OdeSpec, degx: int, degy: int) -> SymmetryBasis:
    """All symmetries with ``deg_x <= degx`` and ``deg_y <= degy`` components.

    Unknowns are ordered by graded monomial so that each returned generator
    has a distinct leading monomial (its highest unknown with coefficient 1).
    """
    if degx < 1 or degy < 1:
        raise ValueError("ansatz degrees must be at least 1")
    N = ode.trunc
    if N is not None:
        n_eff = N - 1
        if n_eff <= degy + 3:
            raise TruncationTooLow(
                f"truncation {N} certifies residuals only through y^{n_eff}; "
                f"degree {degy} in y needs more than y^{degy + 3}"
            )
    x, y = var("x"), var("y")
    candidates, labels = [], []
    for i, j in _ansatz_monomials(degx, degy):
        mono = x**i * y**j
        for comp, name in ((0, "xi"), (1, "eta")):
            comps = (mono, const(0)) if comp == 0 else (const(0), mono)
            candidates.append(VectorField(PLANE, comps))
            labels.append(f"{name}[{i},{j}]")
    gens, params, cap = _solve(ode, candidates, labels)
    return _with_structure(SymmetryBasis(gens, params, cap))


def _with_structure(basis: SymmetryBasis) -> SymmetryBasis:
    return SymmetryBasis(basis.generators, basis.parameters, basis.certified_order, structure_constants(basis))


def structure_constants(basis) -> StructureTable:
    """Expand every bracket of the generators back in the basis.

    ``basis`` may be a :class:`SymmetryBasis` or a plain list of fields.
    """
    gens = list(basis.generators if isinstance(basis, SymmetryBasis) else basis)
    n = len(gens)
    zero = Fraction(0)
    table = [[[zero] * n for _ in range(n)] for _ in range(n)]
    closed = True
    for i in range(n):
        for j in range(i + 1, n):
            br = lie_bracket(gens[i], gens[j])
            coeffs = _express(br, gens)
            if coeffs is None:
                closed = False
                continue
            for k, c in enumerate(coeffs):
                table[i][j][k] = as_scalar(c)
                table[j][i][k] = as_scalar(-c)
    killing = None
    if closed:
        # K(a, b) = tr(ad_a ad_b), (ad_a)[k][j] = table[a][j][k]
        killing = [
            [
                as_scalar(sum((table[a][j][k] * table[b][k][j] for j in range(n) for k in range(n)), zero))
                for b in range(n)
            ]
            for a in range(n)
        ]
    return StructureTable(table, closed, killing)
