import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logharm.errors import (
    BranchAmbiguity,
    PointOutsideRadius,
    SingularLeadingCoefficient,
)
from logharm.series import (
    TaylorSeries,
    antiderivative,
    derivative,
    div,
    eval_series,
    exp_series,
    exponential,
    koebe_factor,
    log_derivative,
    log_series,
    max_coeff_error,
    mul,
    shift_down,
)

N = 32

small = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
cplx = st.builds(complex, small, small)


def series_st(order=N, c0=None):
    coeffs = st.lists(cplx, min_size=order + 1, max_size=order + 1)
    if c0 is None:
        return coeffs.map(lambda c: TaylorSeries(c))
    return coeffs.map(lambda c: TaylorSeries([c0, *c[1:]]))


# -- construction and evaluation -------------------------------------------


def test_padding_and_truncation():
    s = TaylorSeries([1, 2], order=4)
    assert s.order == 4
    assert list(s.coeffs) == [1, 2, 0, 0, 0]
    assert TaylorSeries([1, 2, 3, 4], order=1).coeffs.tolist() == [1, 2]


def test_coefficients_are_immutable():
    s = TaylorSeries([1, 2, 3])
    with pytest.raises(ValueError):
        s.coeffs[0] = 5


def test_rejects_non_finite_and_bad_radius():
    with pytest.raises(ValueError):
        TaylorSeries([1, np.nan])
    with pytest.raises(ValueError):
        TaylorSeries([1], ref_radius=1.5)


def test_eval_outside_radius_is_an_error():
    s = TaylorSeries([1, 1], ref_radius=0.5)
    with pytest.raises(PointOutsideRadius):
        s(0.6)
    assert s(0.5) == 1.5


def test_ref_radius_is_min_over_operands():
    a = TaylorSeries([1, 1], ref_radius=0.5)
    b = TaylorSeries([1, 2], ref_radius=0.9)
    assert (a + b).ref_radius == 0.5
    assert mul(a, b).ref_radius == 0.5


@given(series_st(), st.lists(cplx, min_size=1, max_size=8))
@settings(max_examples=50, deadline=None)
def test_horner_matches_naive_sum(s, zs):
    z = 0.9 * np.array(zs) / np.maximum(1.0, np.abs(np.array(zs)))
    naive = np.array([sum(c * zz**n for n, c in enumerate(s.coeffs)) for zz in z])
    assert np.max(np.abs(eval_series(s, z) - naive)) < 1e-13


def test_scalar_in_scalar_out():
    v = TaylorSeries([1, 1])(0.25)
    assert isinstance(v, complex)


# -- ring axioms --------------------------------------------------------------


@given(series_st(), series_st(), series_st())
@settings(max_examples=40, deadline=None)
def test_distributivity(a, b, c):
    lhs = mul(a + b, c)
    rhs = mul(a, c) + mul(b, c)
    assert max_coeff_error(lhs, rhs) < 1e-12


@given(series_st(), series_st())
@settings(max_examples=40, deadline=None)
def test_commutativity(a, b):
    assert max_coeff_error(a + b, b + a) == 0
    assert max_coeff_error(mul(a, b), mul(b, a)) < 1e-12


def test_product_examples():
    one_plus = TaylorSeries([1, 1], order=N)
    sq = mul(one_plus, one_plus)
    assert sq.coeffs[:4].tolist() == [1, 2, 1, 0]
    # (1 - z)^-1 squared gives n + 1
    geo = TaylorSeries.geometric(1.0, order=N)
    assert np.array_equal(mul(geo, geo).coeffs.real, np.arange(1, N + 2))


# -- division -----------------------------------------------------------------


def test_division_examples():
    one = TaylorSeries([1], order=N)
    q = div(one, TaylorSeries([1, -1], order=N))
    assert np.array_equal(q.coeffs, np.ones(N + 1))
    a = TaylorSeries([2, 3, 5], order=N)
    assert np.array_equal(div(a, a).coeffs, np.eye(1, N + 1)[0])
    with pytest.raises(SingularLeadingCoefficient):
        div(one, TaylorSeries([0, 1], order=N))
    with pytest.raises(SingularLeadingCoefficient):
        div(one, TaylorSeries([1e-13, 1], order=N))


@given(series_st(), series_st(c0=1.0))
@settings(max_examples=40, deadline=None)
def test_division_inverts_multiplication(a, b):
    assert max_coeff_error(mul(div(a, b), b), a) < 1e-9 * max(1.0, np.max(np.abs(div(a, b).coeffs)))


# -- calculus -----------------------------------------------------------------


def test_derivative_examples():
    assert derivative(TaylorSeries([1, 1, 1])).coeffs.tolist() == [1, 2]
    assert antiderivative(TaylorSeries([1])).coeffs.tolist() == [0, 1]


def test_antiderivative_of_derivative_is_exact_for_integer_series():
    s = TaylorSeries(np.arange(7, 7 + N + 1) + 1j * np.arange(N + 1))
    back = antiderivative(derivative(s))
    expected = s.coeffs.copy()
    expected[0] = 0
    assert np.array_equal(back.coeffs, expected)


@given(series_st())
@settings(max_examples=60, deadline=None)
def test_derivative_of_antiderivative(s):
    back = derivative(antiderivative(s))
    assert back.order == s.order
    # n * (c / n) can differ from c by one rounding step
    assert np.all(np.abs(back.coeffs - s.coeffs) <= 4 * np.finfo(float).eps * np.abs(s.coeffs) + 1e-300)


# -- exp and log --------------------------------------------------------------


def test_exp_examples():
    assert np.array_equal(exp_series(TaylorSeries([0])).coeffs, [1])
    e = exp_series(TaylorSeries([0, 2], order=20))
    oracle = np.array([2.0**n / math.factorial(n) for n in range(21)])
    assert np.max(np.abs(e.coeffs - oracle)) < 1e-12
    assert max_coeff_error(exponential(2, order=20), e) < 1e-12


def test_log_of_one_minus_z_is_mercator():
    L = log_series(TaylorSeries([1, -1], order=N))
    oracle = np.concatenate([[0.0], [-1.0 / n for n in range(1, N + 1)]])
    assert np.max(np.abs(L.coeffs - oracle)) < 1e-14


def test_log_branch_refusal():
    with pytest.raises(BranchAmbiguity):
        log_series(TaylorSeries([-1, 0.1]))


def test_log_of_nonunit_constant_uses_principal_branch():
    L = log_series(TaylorSeries([2 + 1j, 0.0], order=4))
    assert L.coeffs[0] == pytest.approx(np.log(2 + 1j))


@given(series_st(c0=1.0))
@settings(max_examples=40, deadline=None)
def test_exp_log_round_trip_without_zeros_in_disc(s):
    # sum |c_n| < 1 keeps s away from 0 on the closed disc, so log s has
    # bounded coefficients and the absolute bound applies
    tail = s.coeffs[1:]
    s = TaylorSeries([1.0, *(0.99 * tail / max(1.0, np.sum(np.abs(tail))))])
    assert max_coeff_error(exp_series(log_series(s)), s) < 1e-10


@given(series_st(c0=1.0))
@settings(max_examples=40, deadline=None)
def test_exp_log_round_trip_general(s):
    # zeros inside the disc make log coefficients grow geometrically; the
    # round-trip error then scales with that intermediate size
    L = log_series(s)
    scale = max(1.0, float(np.max(np.abs(L.coeffs))))
    assert max_coeff_error(exp_series(L), s) < 1e-10 * scale


def test_log_derivative_examples():
    assert np.array_equal(log_derivative(TaylorSeries([1], order=N)).coeffs, np.zeros(N + 1))
    ld = log_derivative(TaylorSeries([1, 1], order=N))
    oracle = np.array([0] + [(-1.0) ** (n + 1) for n in range(1, N + 1)])
    assert np.max(np.abs(ld.coeffs - oracle)) < 1e-12
    k = log_derivative(koebe_factor(0.0, order=N))
    assert k.coeffs[0] == 0
    assert np.max(np.abs(k.coeffs[1:] - 2)) < 1e-10


def test_shift_down_requires_zero_constant():
    assert shift_down(TaylorSeries([0, 3, 4])).coeffs.tolist() == [3, 4]
    with pytest.raises(ValueError):
        shift_down(TaylorSeries([1, 3]))


def test_koebe_binomial_coefficients():
    # (1 - z)^(-p) has coefficients Gamma(n + p) / (Gamma(p) n!)
    k = koebe_factor(0.25, order=40)
    p = 1.5
    oracle = [math.exp(math.lgamma(n + p) - math.lgamma(p) - math.lgamma(n + 1)) for n in range(41)]
    assert np.max(np.abs(k.coeffs - oracle) / oracle) < 1e-13
