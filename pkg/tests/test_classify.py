import json
import random
from fractions import Fraction
from math import comb

import pytest

from shearode.classify import (
    Label,
    classify,
    closed_form,
    normal_form,
    normalize,
    recursion_witness,
)
from shearode.errors import InsufficientTruncation, NotNormalizable
from shearode.gauss import GaussRational, I
from shearode.ode import PointMap, make_shear_ode, pushforward
from shearode.parser import parse_expr
from shearode.poly import const, series, var
from shearode.verification import random_scalar

y = var("y")
N = 24


def binomial_closed_form(C1, c, k, n_max):
    """Independent oracle: C1 y^k (1-cy)^(-k-3) from the binomial series."""
    coeffs = [Fraction(0)] * (n_max + 1)
    for n in range(n_max + 1 - k):
        coeffs[n + k] = C1 * comb(n + k + 2, k + 2) * c**n
    return series(coeffs, n_max)


@pytest.mark.parametrize("k", [0, 1, 2, 5])
def test_closed_form_matches_binomial_oracle(k):
    C1, c = Fraction(3, 2), Fraction(-2, 5)
    assert closed_form(C1, c, k, 15) == binomial_closed_form(C1, c, k, 15)


def test_quadric():
    r = classify(const(0), const(0), N)
    assert r.label is Label.QUADRIC
    assert r.isotropy_dim_claim == 10


def test_family_a_example():
    r = classify(parse_expr("y^2*(1-y)^-5", N), const(0), N)
    assert r.label is Label.FAMILY_A
    assert (r.k, r.c, r.constants["C1"]) == (2, 1, 1)
    assert r.isotropy_dim_claim == 4
    assert r.certified_order == N


def test_family_b_example():
    f1 = parse_expr("y*(1-2*y)^-4", N)
    f0 = parse_expr("5*y^4*(1-2*y)^-7", N)
    r = classify(f0, f1, N)
    assert r.label is Label.FAMILY_B
    assert (r.ell, r.C, r.c) == (1, 5, 2)


def test_family_b_with_zero_c():
    r = classify(const(0), parse_expr("y^2*(1+y)^-5", N), N)
    assert r.label is Label.FAMILY_B
    assert r.C == 0


def test_multishear():
    r = classify(parse_expr("7*(1-3*y)^-3", N), const(0), N)
    assert r.label is Label.MULTISHEAR
    assert r.k == 0


def test_generic():
    r = classify(parse_expr("y+y^3", N), const(1), N)
    assert r.label is Label.GENERIC
    assert r.evidence["excluded_through_order"] >= 16
    assert r.isotropy_dim_claim == "<=3"


def test_generic_when_family_b_shapes_disagree():
    # f1 matches with c=1 but f0 uses another c
    f1 = parse_expr("(1-y)^-3", N)
    f0 = parse_expr("y^2*(1-2*y)^-5", N)
    assert classify(f0, f1, N).label is Label.GENERIC


def test_insufficient_truncation():
    with pytest.raises(InsufficientTruncation):
        classify(parse_expr("y^5*(1-y)^-8", 12), const(0), 12)


@pytest.mark.parametrize("seed", range(4))
def test_random_family_a_round_trip(seed):
    rng = random.Random(seed)
    k = rng.choice([1, 2, 3])
    C1, c = random_scalar(rng), random_scalar(rng)
    r = classify(binomial_closed_form(C1, c, k, N), const(0), N)
    assert r.label is Label.FAMILY_A
    assert (r.k, r.c, r.constants["C1"]) == (k, c, C1)


def test_normalize_family_a():
    f0 = parse_expr("y^2*(1-y)^-5", 16)
    r = classify(f0, const(0), 16)
    g0, g1 = normalize(r, f0, const(0))
    assert g0 == (y**2).with_trunc(g0.trunc)
    assert g1.is_zero()
    assert normal_form(r) == (y**2, const(0))


@pytest.mark.parametrize("k", [1, 3])
def test_normalize_odd_k_gaussian(k):
    C1, c = GaussRational(2, 1), GaussRational(0, -1)
    f0 = binomial_closed_form(C1, c, k, 18)
    r = classify(f0, const(0), 18)
    g0, g1 = normalize(r, f0, const(0))
    assert g0 == (y**k).with_trunc(g0.trunc)


def test_normalize_family_b():
    f1 = parse_expr("3*y*(1-2*y)^-4", 20)
    f0 = parse_expr("5*y^4*(1-2*y)^-7", 20)
    r = classify(f0, f1, 20)
    g0, g1 = normalize(r, f0, f1)
    t = g0.trunc
    assert g1 == y.with_trunc(t)
    assert g0 == (y**4).scale(r.C).with_trunc(t)
    assert r.C == Fraction(5, 9)


def test_normalize_multishear_to_quartic():
    f0 = parse_expr("4*(1-y)^-3", 16)
    r = classify(f0, const(0), 16)
    g0, _ = normalize(r, f0, const(0))
    assert g0 == const(1, g0.trunc)


def test_not_normalizable_without_square_root():
    f0 = parse_expr("2*y^2", N)
    r = classify(f0, const(0), N)
    assert r.label is Label.FAMILY_A
    with pytest.raises(NotNormalizable):
        normalize(r, f0, const(0))


def test_generic_is_not_normalizable():
    r = classify(parse_expr("y+y^3", N), const(1), N)
    with pytest.raises(NotNormalizable):
        normalize(r, const(0), const(0))


def test_quartic_is_already_normal():
    r = classify(const(1), const(0), N)
    g0, g1 = normalize(r, const(1), const(0))
    assert g0 == const(1, g0.trunc) and g1.is_zero()


def test_classification_is_invariant_under_projective_maps():
    rng = random.Random(11)
    f0 = binomial_closed_form(Fraction(2), Fraction(1, 3), 2, 20)
    for _ in range(3):
        pmap = PointMap.projective(random_scalar(rng, False), random_scalar(rng, False), random_scalar(rng, False))
        g0, g1 = pushforward(make_shear_ode(f0, 0), pmap, 20).shear_data()
        r = classify(g0, g1, g0.trunc)
        assert r.label is Label.FAMILY_A and r.k == 2


def test_recursion_witness():
    k = 3
    f0 = y**k
    a = Fraction(-7, 2)
    beta1 = -2 * a / (k + 4)
    assert recursion_witness(f0, 0, a, beta1, 0)
    assert not recursion_witness(f0, 0, a, beta1 + 1, 0)
    assert not recursion_witness(f0 + y ** (k + 1), 0, a, beta1, 0)
    assert recursion_witness(0, 0, 1, 2, 3)


def test_report_serializes():
    r = classify(parse_expr("y^2*(1+i*y)^-5", N), const(0), N)
    d = r.to_dict()
    json.dumps(d)
    assert d["label"] == "FAMILY_A"
    assert d["c"] == "-i" or d["c"] == "-1*i"
    assert d["normalizer"]["kind"] == "projective"


def test_complex_c_detected():
    r = classify(binomial_closed_form(1, I, 1, N), const(0), N)
    assert r.c == I
