"""The dual of the quartic ODE and the locus of non-linearizable isotropy.

Numeric checks use complex doubles with a square-root branch search; the
fixed-point and orbit checks are exact.
"""

from __future__ import annotations

import cmath
import enum
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import BranchFailure, PoleHit
from .fields import VectorField, jet_field, plane_field, prolong
from .gauss import as_scalar
from .ode import (
    DUAL_FAMILY,
    PointMap,
    _family,
    make_shear_ode,
    pushforward,
    sample_solutions,
    shear_factor,
)
from .poly import const, var

__all__ = [
    "DEFAULT_TOLERANCE",
    "dual_rhs",
    "dual_family_jets",
    "dual_residual_check",
    "lie_form_check",
    "mobius_action_check",
    "random_unimodular",
    "QUARTIC_SWAP_FAMILY",
    "involution_check",
    "QuarticIsotropyField",
    "FixedPointCase",
    "FixedPointSet",
    "fixed_point_set",
    "gamma_orbit_check",
    "NumericCheck",
]

DEFAULT_TOLERANCE = 1e-9

# quartic family with (x, y) <-> (c1, c2) roles swapped: new x is the old c2,
# new y the old c1, and the old (x, y) become the parameters (c1v, c2v)
QUARTIC_SWAP_FAMILY = _family("(c2v - y*c1v)^2 - x^2*c1v^2 - x", "quartic-swapped")

Jet = Tuple[complex, complex, complex, complex]


@dataclass(frozen=True)
class NumericCheck:
    max_residual: float
    residuals: Tuple[float, ...]
    branches: Tuple[int, ...]
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.max_residual < self.tolerance


def dual_rhs(x, p, sign: int) -> complex:
    """``(1 - p^2) / (x (p + s sqrt(p^2 - 1)))`` with ``s = sign``."""
    root = cmath.sqrt(complex(p) ** 2 - 1)
    den = complex(x) * (p + sign * root)
    if den == 0:
        raise PoleHit("denominator of the dual equation vanishes")
    return (1 - complex(p) ** 2) / den


def dual_family_jets(n: int = 20, seed: int = 42, branch: int = 0) -> List[Jet]:
    """Jets on ``(x - c1)^2 - (y - c2)^2 = c1^2`` with ``c1, c2`` in [1, 3], ``x > 2 c1``."""
    rng = random.Random(seed)
    params, xs = [], []
    for _ in range(n):
        c1, c2 = rng.uniform(1, 3), rng.uniform(1, 3)
        params.append((c1, c2))
        xs.append(2 * c1 + rng.uniform(0.5, 2.0))
    return sample_solutions(DUAL_FAMILY, params, xs, branch=branch)


def _branch_min(values: Sequence[complex]) -> Tuple[float, int]:
    mags = [abs(v) for v in values]
    best = min(range(len(mags)), key=mags.__getitem__)
    return mags[best], best


def _finish(residuals, branches, tol, strict, what) -> NumericCheck:
    out = NumericCheck(max(residuals) if residuals else 0.0, tuple(residuals), tuple(branches), tol)
    if strict and not out.ok:
        bad = next(i for i, r in enumerate(residuals) if r >= tol)
        raise BranchFailure(f"{what}: no square-root branch fits sample {bad} (residual {residuals[bad]:.3g})")
    return out


def dual_residual_check(jets: Optional[Sequence[Jet]] = None, tol: float = DEFAULT_TOLERANCE, strict: bool = True) -> NumericCheck:
    """``|y'' - RHS|`` on each jet, minimized over the square-root branch."""
    jets = dual_family_jets() if jets is None else jets
    residuals, branches = [], []
    for x, y, p, ypp in jets:
        if abs(x) < 1e-12:
            raise PoleHit("sample at x = 0")
        vals = []
        for sign in (1, -1):
            try:
                vals.append(ypp - dual_rhs(x, p, sign))
            except PoleHit:
                vals.append(complex("inf"))
        r, b = _branch_min(vals)
        residuals.append(r)
        branches.append(b)
    return _finish(residuals, branches, tol, strict, "dual equation")


def lie_jet(jet: Jet) -> Jet:
    """``(xi, eta, eta', eta'')`` under ``xi = y + x``, ``eta = y - x``."""
    x, y, p, ypp = (complex(v) for v in jet)
    if abs(p + 1) < 1e-12:
        raise PoleHit("y' = -1 makes xi stationary")
    return y + x, y - x, (p - 1) / (p + 1), 2 * ypp / (p + 1) ** 3


def lie_form_check(jets: Optional[Sequence[Jet]] = None, tol: float = DEFAULT_TOLERANCE, strict: bool = True, transform: bool = True) -> NumericCheck:
    """Residual of ``eta'' + 2 eta' (1 - sqrt(eta'))^2 / (xi - eta)``.

    With ``transform=False`` the jets are fed in unchanged (a negative control).
    """
    jets = dual_family_jets() if jets is None else jets
    residuals, branches = [], []
    for jet in jets:
        xi, eta, e1, e2 = lie_jet(jet) if transform else tuple(complex(v) for v in jet)
        if abs(xi - eta) < 1e-12:
            raise PoleHit("xi = eta")
        root = cmath.sqrt(e1)
        vals = [e2 + 2 * e1 * (1 - s * root) ** 2 / (xi - eta) for s in (1, -1)]
        r, b = _branch_min(vals)
        residuals.append(r)
        branches.append(b)
    return _finish(residuals, branches, tol, strict, "Lie form")


def involution_check(n: int = 20, seed: int = 42, tol: float = DEFAULT_TOLERANCE, strict: bool = True) -> NumericCheck:
    """Jets of the quartic family with variables and parameters swapped solve the dual equation."""
    rng = random.Random(seed)
    params, xs = [], []
    for _ in range(n):
        s, t = rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)
        params.append((s, t))
        xs.append(rng.uniform(0.2, 1.5))
    jets = sample_solutions(QUARTIC_SWAP_FAMILY, params, xs, branch=0, allow_complex=True)
    return dual_residual_check(jets, tol, strict)


# ------------------------------------------------------------ coupled Moebius
def random_unimodular(rng: random.Random) -> Tuple[float, float, float, float]:
    while True:
        a, b, c = (rng.uniform(-2, 2) for _ in range(3))
        if abs(a) > 0.3:
            return a, b, c, (1 + b * c) / a


def _moebius(g, z: complex) -> complex:
    a, b, c, d = g
    den = c * z + d
    if abs(den) < 1e-10:
        raise PoleHit("sample point is sent to infinity")
    return (a * z + b) / den


def _dual_F(x, y, c1, c2) -> complex:
    return (x - c1) ** 2 - (y - c2) ** 2 - c1**2


def _fit_dual(p1, p2) -> List[Tuple[complex, complex]]:
    """Members of the dual family through two points (up to two)."""
    (x1, y1), (x2, y2) = p1, p2
    if abs(x1 - x2) < 1e-12:
        raise PoleHit("fit points share x")
    A = ((x1**2 - x2**2) - (y1**2 - y2**2)) / (2 * (x1 - x2))
    B = (y1 - y2) / (x1 - x2)
    # c1 = A + B c2 substituted into x1^2 - 2 x1 c1 - (y1 - c2)^2 = 0
    qa, qb, qc = -1.0, 2 * y1 - 2 * x1 * B, x1**2 - 2 * x1 * A - y1**2
    disc = cmath.sqrt(qb * qb - 4 * qa * qc)
    return [(A + B * c2, c2) for c2 in ((-qb + disc) / (2 * qa), (-qb - disc) / (2 * qa))]


def mobius_action_check(
    g,
    c1: float = 1.5,
    c2: float = 2.0,
    xs: Sequence[float] = (3.5, 4.25, 5.0),
    tol: float = 1e-8,
    g_eta=None,
) -> bool:
    """Fit two image points of one dual-family curve, predict the third.

    ``g = (a, b, c, d)`` acts on ``xi = y + x`` and ``eta = y - x`` by the
    same Moebius transformation; ``g_eta`` decouples the two (a control).
    """
    g_eta = g if g_eta is None else g_eta
    for m in (g, g_eta):
        a, b, c, d = m
        if abs(a * d - b * c) < 1e-14:
            raise ValueError("g must be invertible")
    jets = sample_solutions(DUAL_FAMILY, [(c1, c2)] * len(xs), xs, branch=0)
    images = []
    for x, y, _, _ in jets:
        xi, eta = _moebius(g, y + x), _moebius(g_eta, y - x)
        images.append(((xi - eta) / 2, (xi + eta) / 2))
    for k1, k2 in _fit_dual(images[0], images[1]):
        x3, y3 = images[2]
        scale = max(1.0, abs(x3), abs(y3), abs(k1), abs(k2)) ** 2
        if abs(_dual_F(x3, y3, k1, k2)) <= tol * scale:
            return True
    return False


# ---------------------------------------------------------- fixed-point sets
@dataclass(frozen=True)
class QuarticIsotropyField:
    """``(alpha x + beta y) d/dx + (delta x - alpha y) d/dy + (delta - 2 alpha p - beta p^2) d/dp``."""

    alpha: object
    beta: object
    delta: object

    def __post_init__(self):
        for name in ("alpha", "beta", "delta"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))

    @property
    def discriminant(self):
        return as_scalar(self.alpha**2 + self.beta * self.delta)

    def plane(self) -> VectorField:
        x, y = var("x"), var("y")
        return plane_field(x.scale(self.alpha) + y.scale(self.beta), x.scale(self.delta) - y.scale(self.alpha))

    def jet(self) -> VectorField:
        p = var("p")
        v = self.plane()
        return jet_field(v["x"], v["y"], const(self.delta) - p.scale(2 * self.alpha) - (p * p).scale(self.beta))

    def prolongs_consistently(self) -> bool:
        return prolong(self.plane()) == self.jet()


class FixedPointCase(str, enum.Enum):
    NONDEGENERATE = "NONDEGENERATE"
    DEGENERATE_BETA = "DEGENERATE_BETA"
    DEGENERATE_ZERO = "DEGENERATE_ZERO"


@dataclass(frozen=True)
class FixedPointSet:
    case: FixedPointCase
    description: str
    equations: Tuple[str, ...]
    on_gamma: Optional[bool]
    verified: bool


def _vanishes_on(v: VectorField, point) -> bool:
    return all(c.substitute(point).is_zero() for c in v.components)


def fixed_point_set(v: QuarticIsotropyField) -> FixedPointSet:
    """Zeros of a quartic isotropy field away from the origin's fibre."""
    al, be, de = v.alpha, v.beta, v.delta
    if not (al or be or de):
        raise ValueError("the zero field fixes everything")
    disc = v.discriminant
    jet = v.jet()
    if disc:
        # the plane part has determinant -disc, so x = y = 0 is forced
        return FixedPointSet(
            FixedPointCase.NONDEGENERATE,
            "fixed points only over x = y = 0",
            ("x", "y"),
            None,
            as_scalar(-(al * al) - be * de) != 0,
        )
    if be:
        x = var("x")
        slope = as_scalar(-al / be)
        point = {"y": x.scale(slope), "p": const(slope)}
        on_gamma = shear_factor().substitute(point).is_zero()
        return FixedPointSet(
            FixedPointCase.DEGENERATE_BETA,
            "alpha x + beta y = 0, p = -alpha/beta",
            (str(x.scale(al) + var("y").scale(be)), str(var("p") - slope)),
            on_gamma,
            _vanishes_on(jet, point),
        )
    # beta = 0 and alpha^2 = 0: the field is delta (x d/dy + d/dp), never zero
    return FixedPointSet(
        FixedPointCase.DEGENERATE_ZERO,
        "alpha = 0 is forced; delta (x d/dy + d/dp) has no zeros",
        (),
        None,
        al == 0 and bool(de) and jet["p"] == const(de),
    )


# -------------------------------------------------------------- Gamma orbit
@dataclass(frozen=True)
class OrbitResult:
    params: Tuple
    factor: object
    pushforward_ok: bool
    reference_on_gamma: bool

    @property
    def ok(self) -> bool:
        return self.pushforward_ok and self.reference_on_gamma


def gamma_orbit_check(points: Sequence[Tuple]) -> List[OrbitResult]:
    """Move the origin to ``(a, b, b/a)`` and compare with ``(ad-bc)^2 (y-(x+1)y')^3``."""
    quartic = make_shear_ode(1, 0)
    x, y, p = var("x"), var("y"), var("p")
    out = []
    for a, b, c, d in points:
        a, b, c, d = (as_scalar(t) for t in (a, b, c, d))
        if not a:
            raise ValueError("a must be nonzero")
        pmap = PointMap.affine(a, b, c, d, a, b)
        det = as_scalar(a * d - b * c)
        expected = ((y - (x + 1) * p) ** 3).scale(det * det)
        image = pushforward(quartic, pmap)
        ref_x, ref_y, ref_p = a, b, as_scalar(b / a)
        out.append(OrbitResult((a, b, c, d), as_scalar(det * det), image.B == expected, ref_y - ref_x * ref_p == 0))
    return out
