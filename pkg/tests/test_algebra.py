from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shearode.errors import TruncationLoss, ZeroConstantTerm
from shearode.gauss import GaussRational, I, as_scalar, exact_sqrt, scalar_str, to_gauss
from shearode.linalg import exact_nullspace, rank, solve_linear
from shearode.poly import TruncPoly, const, series, series_invert, substitute, var

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussRational, fractions, fractions)


@st.composite
def small_series(draw, N=6):
    coeffs = draw(st.lists(gauss, min_size=1, max_size=N + 1))
    return series(coeffs, N)


# ------------------------------------------------------------------ scalars
@given(gauss, gauss, gauss)
def test_gauss_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0


@given(gauss)
def test_gauss_inverse(a):
    if a == 0:
        return
    assert a * a.inverse() == 1


def test_i_squared_and_mixed_arithmetic():
    assert I * I == -1
    assert Fraction(1, 2) + I == GaussRational(Fraction(1, 2), 1)
    assert as_scalar(GaussRational(3, 0)) == Fraction(3)
    assert isinstance(as_scalar(GaussRational(3, 0)), Fraction)


def test_to_gauss_from_string():
    assert to_gauss("3/2 + 2*i") == GaussRational(Fraction(3, 2), 2)


def test_exact_sqrt():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact_sqrt(-4) == 2 * I
    assert exact_sqrt(2) is None


def test_scalar_str():
    assert scalar_str(Fraction(-3, 2)) == "-3/2"
    assert scalar_str(GaussRational(0, 1)) in ("i", "1*i")


# --------------------------------------------------------------- polynomials
def test_difference_of_squares():
    y = var("y")
    assert (1 + y) * (1 - y) == 1 - y * y


def test_shear_factor_square():
    x, y, p = var("x"), var("y"), var("p")
    u = y - x * p
    assert u * u == y * y - 2 * x * y * p + x * x * p * p


def test_product_of_truncated_series():
    y = var("y", 24)
    assert (y**2) * (3 * y) == (3 * y**3).with_trunc(24)


def test_partial_of_cube():
    x, y, p = var("x"), var("y"), var("p")
    u = y - x * p
    assert (u**3).partial("p") == -3 * x * u * u


def test_partial_monomial():
    y = var("y")
    for k in range(1, 6):
        assert (y**k).partial("y") == (y ** (k - 1)).scale(k)


def test_second_derivative_of_series():
    c = [Fraction(n + 1, n + 2) for n in range(10)]
    phi = series(c, 9)
    expected = series([(n + 2) * (n + 1) * c[n + 2] for n in range(8)], 7)
    assert phi.diff("y", 2) == expected


def test_truncation_propagates_to_min():
    a = series([1, 2, 3], 5)
    b = series([1, 1], 3)
    assert (a + b).trunc == 3
    assert (a * b).trunc == 3


@settings(max_examples=40, deadline=None)
@given(small_series(), small_series(), small_series())
def test_series_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@settings(max_examples=40, deadline=None)
@given(small_series())
def test_invert_is_inverse(a):
    if not a.coeff({}):
        with pytest.raises(ZeroConstantTerm):
            series_invert(a, 6)
        return
    inv = series_invert(a, 6)
    assert (a * inv - 1).is_zero()


def test_geometric_series():
    y = var("y")
    assert series_invert(1 - y, 3) == series([1, 1, 1, 1], 3)


def test_inverse_cubed_against_repeated_multiplication():
    c = Fraction(5, 3)
    y = var("y")
    inv = series_invert(1 - y * c, 2)
    oracle = series([1, 3 * c, 6 * c * c], 2)
    assert inv**3 == oracle


def test_invert_constant():
    assert series_invert(const(2), 5) == const(Fraction(1, 2), 5)


def test_substitute_geometric():
    y = var("y")
    binding = y * series_invert(1 - y, 3)
    assert substitute(y, {"y": binding}, 3) == series([0, 1, 1, 1], 3)


def test_substitute_identity():
    x, y = var("x"), var("y")
    assert substitute(y * y, {"y": y, "x": x}) == y * y


def test_substitute_inverse_map_recovers_original():
    N = 12
    y = var("y", N)
    f0 = y**2 * series_invert(1 - y, N) ** 5
    image = substitute(f0, {"y": y * series_invert(1 + y, N)}, N)
    # (1 - y)^-1 becomes 1 + y, so the image is y^2 (1 + y)^3 rather than y^2
    assert image == (y**2 * (1 + y) ** 3).with_trunc(N)
    back = substitute(image, {"y": y * series_invert(1 - y, N)}, N)
    assert back == f0


def test_substitute_constant_term_into_truncated_series_raises():
    f = series([1, 2, 3], 4)
    with pytest.raises(TruncationLoss):
        substitute(f, {"y": 1 + var("y")})


def test_binomial_oracle_for_negative_power():
    N, k = 10, 3
    y = var("y")
    got = series_invert(1 - y, N) ** (k + 3)
    assert got.coefficients(N) == [comb(n + k + 2, k + 2) for n in range(N + 1)]


def test_evaluate_numeric():
    x, y = var("x"), var("y")
    assert (x * y + 1).evaluate({"x": 2, "y": 3}) == 7
    assert (x * y).evaluate({"x": 1j, "y": 1j}) == -1


def test_immutable():
    p = var("y")
    with pytest.raises(AttributeError):
        p.trunc = 3


# --------------------------------------------------------------------- linalg
def test_nullspace_identity_and_zero():
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert exact_nullspace(eye) == []
    assert len(exact_nullspace([[0, 0, 0], [0, 0, 0]])) == 3


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_rank_nullity(M):
    basis = exact_nullspace(M, 4)
    assert rank(M, 4) + len(basis) == 4
    for v in basis:
        for row in M:
            assert sum(a * b for a, b in zip(row, v)) == 0


def test_isotropic_two_by_two_forces_trivial_solution():
    # orders n = l and n = k of the two recursions, with k != 2l + 2
    ell, k = 1, 3
    M = [[1, ell + 3], [2, k + 4]]
    assert exact_nullspace(M) == []
    # at k = 2l + 2 the system degenerates
    k = 2 * ell + 2
    assert len(exact_nullspace([[1, ell + 3], [2, k + 4]])) == 1


def test_solve_linear_complex():
    sol = solve_linear([[1, I], [0, 2]], [1 + I, 2])
    assert sol == [1, 1]
    assert solve_linear([[1, 1], [1, 1]], [1, 2]) is None


def test_truncpoly_rejects_bad_exponents():
    with pytest.raises(ValueError):
        TruncPoly({(1, 2): 1}, ("y",))
