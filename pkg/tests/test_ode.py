import math
import random
from fractions import Fraction

import pytest

from shearode.errors import BranchFailure, DegreeOverflow, NormalFormRequired
from shearode.gauss import GaussRational, I
from shearode.ode import (
    LINE_FAMILY,
    QUARTIC_FAMILY,
    OdeSpec,
    PointMap,
    make_shear_ode,
    ode_residual_at,
    pushforward,
    sample_solutions,
    scaling_action,
    shear_factor,
)
from shearode.parser import parse_expr
from shearode.poly import const, series, var
from shearode.verification import random_series

x, y, p = var("x"), var("y"), var("p")


def test_quartic_right_hand_side():
    ode = make_shear_ode(1, 0)
    assert ode.B == y**3 - 3 * x * y**2 * p + 3 * x**2 * y * p**2 - x**3 * p**3


def test_quadric_is_zero():
    assert make_shear_ode(0, 0).B.is_zero()


def test_family_a_shape():
    k = 3
    assert make_shear_ode(y**k, 0).B == y**k * shear_factor() ** 3


def test_shear_data_recovers_pair_from_bare_rhs():
    f0, f1 = parse_expr("1 + 2*y"), parse_expr("y^2")
    bare = OdeSpec(make_shear_ode(f0, f1).B)
    assert bare.shear_data() == (f0, f1)
    assert bare.is_shear_normal()


def test_non_normal_form_is_detected():
    ode = OdeSpec(x * p)
    assert not ode.is_shear_normal()
    with pytest.raises(NormalFormRequired):
        ode.shear_data()


def test_rejects_degree_four():
    with pytest.raises(DegreeOverflow):
        OdeSpec(p**4)


@pytest.mark.parametrize("a,b,c,d", [(1, 0, 0, 1), (2, 3, 0, 1), (1, 2, 3, 4), (I, 1, 0, 2)])
def test_affine_orbit_of_quartic(a, b, c, d):
    out = pushforward(make_shear_ode(1, 0), PointMap.affine(a, b, c, d, a, b))
    det = a * d - b * c
    expected = (y - (x + 1) * p) ** 3 * (det * det)
    assert out.B == expected


def test_identity_map_leaves_ode_unchanged():
    ode = make_shear_ode(parse_expr("1+y^2", 12), parse_expr("3*y", 12))
    assert pushforward(ode, PointMap.identity()).B == ode.B


def test_projective_normalization_of_family_a():
    N, k = 14, 2
    C1, c = Fraction(1), Fraction(1)
    f0 = parse_expr("y^2*(1-y)^-5", N)
    out = pushforward(make_shear_ode(f0, 0), PointMap.projective(-c, 1, 1), N)
    g0, g1 = out.shear_data()
    assert g0 == (y**k).with_trunc(N) * C1
    assert g1.is_zero()


def test_projective_law_shifts_c():
    # (x, y) = (c1 X, c2 Y)/(1 - c' Y) sends the parameter c to c' + c2 c
    N, k = 12, 1
    c, cp, c2 = Fraction(1, 3), Fraction(2, 5), Fraction(3, 2)
    f0 = y**k * series_power(1 - y * c, -(k + 3), N)
    out = pushforward(make_shear_ode(f0, 0), PointMap.projective(cp, 1, c2), N)
    g0, _ = out.shear_data()
    lead = g0.coeff({"y": k})
    assert g0 == (y**k * series_power(1 - y * (cp + c2 * c), -(k + 3), N)).scale(lead).with_trunc(out.trunc)


def series_power(base, e, N):
    from shearode.poly import series_invert

    return series_invert(base.with_trunc(N), N) ** (-e)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_direct_and_interpolated_pushforward_agree(seed):
    rng = random.Random(seed)
    N = 8
    ode = make_shear_ode(random_series(rng, N), random_series(rng, N))
    for pmap in (
        PointMap.projective(Fraction(1, 2), 2, Fraction(-1, 3)),
        PointMap.affine(1, 0, Fraction(2, 3), 1),
    ):
        direct = pushforward(ode, pmap, N)
        grid = pushforward(ode, pmap, N, method="interpolate")
        assert direct.B == grid.B


def test_affine_functoriality():
    ode = make_shear_ode(parse_expr("2+y", 10), parse_expr("y^2", 10))
    g = PointMap.affine(1, 0, 2, 1)
    h = PointMap.affine(3, 0, 1, 1)
    step = pushforward(pushforward(ode, g), h)
    once = pushforward(ode, g.compose(h))
    assert step.B == once.B


def test_non_admissible_map_overflows():
    # y = X + Y feeds x into the series f0, so B is no longer cubic in x
    ode = make_shear_ode(parse_expr("y", 6), 0)
    with pytest.raises(DegreeOverflow):
        pushforward(ode, PointMap.affine(1, 1, 0, 1), 6)
    with pytest.raises(DegreeOverflow):
        pushforward(ode, PointMap.affine(1, 1, 0, 1), 6, method="interpolate")


def test_point_map_rejects_degenerate():
    with pytest.raises(ValueError):
        PointMap.affine(1, 2, 2, 4)
    with pytest.raises(ValueError):
        PointMap.projective(1, 0, 1)


def test_scaling_identity():
    f0, f1 = const(1), const(0)
    assert scaling_action(f0, f1, 1, 1) == (f0, f1)


def test_scaling_matches_affine_pushforward():
    N = 10
    f0, f1 = parse_expr("1+2*y+y^3", N), parse_expr("y-y^2", N)
    lam, mu = Fraction(2, 3), Fraction(-5, 2)
    g0, g1 = scaling_action(f0, f1, lam, mu)
    h0, h1 = pushforward(make_shear_ode(f0, f1), PointMap.affine(lam, 0, 0, mu), N).shear_data()
    assert (g0, g1) == (h0, h1)


def test_family_a_stabilizer():
    # the leading coefficient of f0 scales by lam^2 mu^(k+2)
    k = 2
    mu = Fraction(2)
    lam = 1 / mu ** ((k + 2) // 2)
    assert lam * lam * mu ** (k + 2) == 1
    g0, _ = scaling_action(y**k, const(0), lam, mu)
    assert g0 == y**k


@pytest.mark.parametrize("lam,mu", [(2, 3), (Fraction(1, 2), -1), (I, 1 + I)])
def test_family_b_invariant(lam, mu):
    ell = 1
    C1, C2 = Fraction(5), Fraction(3)
    f0 = y ** (2 * ell + 2) * C1
    f1 = y**ell * C2
    g0, g1 = scaling_action(f0, f1, lam, mu)
    D1, D2 = g0.coeff({"y": 2 * ell + 2}), g1.coeff({"y": ell})
    assert D1 / (D2 * D2) == C1 / (C2 * C2)


def test_quartic_family_sample():
    (jet,) = sample_solutions(QUARTIC_FAMILY, [(0, 1)], [1], branch=1)
    xv, yv, yp, _ = jet
    assert abs(yv - math.sqrt(2)) < 1e-12
    assert abs(yp - 1 / math.sqrt(2)) < 1e-12


def test_quartic_family_solves_quartic():
    rng = random.Random(3)
    params = [(rng.uniform(-1, 1), rng.uniform(0.5, 2)) for _ in range(10)]
    xs = [rng.uniform(0.5, 2) for _ in range(10)]
    ode = make_shear_ode(1, 0)
    for branch in (0, 1):
        for jet in sample_solutions(QUARTIC_FAMILY, params, xs, branch=branch):
            assert abs(ode_residual_at(ode, jet)) < 1e-10


def test_lines_solve_quadric_and_perturbation_is_seen():
    jets = sample_solutions(LINE_FAMILY, [(2, 0), (-1, 0)], [1, 3])
    quadric = make_shear_ode(0, 0)
    assert all(ode_residual_at(quadric, j) == 0 for j in jets)
    (jet,) = sample_solutions(QUARTIC_FAMILY, [(0, 1)], [1])
    bumped = (jet[0], jet[1], jet[2], jet[3] + 1)
    assert abs(ode_residual_at(make_shear_ode(1, 0), bumped) - 1) < 1e-10


def test_missing_branch_raises():
    with pytest.raises(BranchFailure):
        sample_solutions(LINE_FAMILY, [(1, 0)], [1], branch=1)


def test_gauss_scalars_in_shear_data():
    f0 = series([GaussRational(1, 2), I], 6)
    assert make_shear_ode(f0, 0).shear_data()[0] == f0
