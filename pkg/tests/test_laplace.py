import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import signal

from ewldyn import (ContractError, DomainError, Polynomial, RationalLaplace, ReservoirParams,
                    StabilityError, eval_exp_sum, final_value, initial_value, partial_fractions,
                    poly_roots, reservoir_polynomials, talbot_invert)
from ewldyn.laplace import cluster_roots


def sorted_roots(r):
    return np.array(sorted(np.asarray(r, complex), key=lambda z: (round(z.real, 8), z.imag)))


def test_roots_of_s2_plus_1():
    np.testing.assert_allclose(sorted_roots(poly_roots(Polynomial([1, 0, 1]))), [-1j, 1j], atol=1e-15)


def test_roots_of_expanded_cubic():
    p = Polynomial([6, 11, 6, 1])
    np.testing.assert_allclose(sorted_roots(poly_roots(p)), [-3, -2, -1], atol=1e-13)


def test_roots_degree_zero_rejected():
    with pytest.raises(DomainError):
        poly_roots(Polynomial([3.0]))


def test_k_roots_residual(unit):
    k = reservoir_polynomials(unit).k
    roots = poly_roots(k)
    assert len(roots) == 6
    assert max(abs(k(r)) for r in roots) < 1e-8


@given(st.lists(st.floats(-5, 5), min_size=2, max_size=6, unique=True))
def test_roots_recover_real_roots(rs):
    rs = np.asarray(rs)
    if len(rs) > 1 and np.min(np.diff(np.sort(rs))) < 1e-2:
        return
    p = Polynomial(np.polynomial.polynomial.polyfromroots(rs))
    got = np.sort(poly_roots(p).real)
    np.testing.assert_allclose(got, np.sort(rs), atol=1e-8)


def test_cluster_roots_is_relative():
    # large roots differing by 1e-4 relative are one cluster; tiny ones are not merged
    groups = cluster_roots([100.0, 100.01, 1e-13, 2e-13], 1e-3)
    assert [0, 1] in groups and [2] in groups and [3] in groups


def test_reservoir_polynomials_unit(unit):
    polys = reservoir_polynomials(unit)
    # (1 + 2s)(8 + s + s^2) multiplied out by hand
    np.testing.assert_allclose(polys.j.coefficients, [8, 17, 3, 2])
    np.testing.assert_allclose(polys.j.coefficients, np.polynomial.polynomial.polymul([1, 2], [8, 1, 1]))
    np.testing.assert_allclose(polys.l.coefficients, [62, 91, 45, 20])
    assert polys.k.degree == 6 and polys.k.leading == pytest.approx(4.0)


@given(st.floats(0.1, 10), st.floats(0.1, 10))
def test_k_structure(g, o):
    k = reservoir_polynomials(ReservoirParams(g, o)).k
    assert k.degree == 6 and k.leading == pytest.approx(4.0)


PAIRS = [
    (RationalLaplace([1], [[1, 1]]), lambda t: np.exp(-t)),
    (RationalLaplace([1], [[0, 1], [1, 1]]), lambda t: 1 - np.exp(-t)),
    (RationalLaplace([1], [[1, 1], [1, 1]]), lambda t: t * np.exp(-t)),
    (RationalLaplace([0, 1], [[2.0, 0, 1]]), lambda t: np.cos(math.sqrt(2) * t)),
]


@pytest.mark.parametrize("f, exact", PAIRS)
def test_partial_fractions_pairs(f, exact):
    t = np.linspace(0, 10, 41)
    np.testing.assert_allclose(eval_exp_sum(partial_fractions(f), t), exact(t), atol=1e-12)


@pytest.mark.parametrize("f, exact", PAIRS)
def test_talbot_pairs(f, exact):
    t = np.linspace(0.05, 5, 40)
    np.testing.assert_allclose(talbot_invert(f, t), exact(t), atol=1e-8)


def test_exp_sum_values():
    assert partial_fractions(PAIRS[0][0]).evaluate(0.0) == pytest.approx(1.0)
    e = partial_fractions(PAIRS[1][0])
    assert e.evaluate(math.log(2)).real == pytest.approx(0.5, abs=1e-14)
    assert abs(partial_fractions(RationalLaplace([1], [[2, 3, 1]])).evaluate(40.0)) <= 1.0001 * math.exp(-40)


def test_talbot_point_values():
    assert talbot_invert(PAIRS[0][0], 1.0) == pytest.approx(math.exp(-1), abs=1e-8)
    assert talbot_invert(PAIRS[1][0], math.log(2)) == pytest.approx(0.5, abs=1e-8)
    with pytest.raises(DomainError):
        talbot_invert(PAIRS[0][0], 0.0)


def test_initial_and_final_values():
    assert initial_value(PAIRS[1][0]) == 0
    assert final_value(PAIRS[1][0]) == pytest.approx(1.0)
    assert initial_value(PAIRS[0][0]) == pytest.approx(1.0)
    with pytest.raises(StabilityError):
        final_value(PAIRS[3][0])


def test_improper_transform_rejected():
    with pytest.raises(ContractError):
        partial_fractions(RationalLaplace([1, 1, 1], [[1, 1]]))
    with pytest.raises(ContractError):
        initial_value(RationalLaplace([1, 1], [[1, 1]]))


@st.composite
def simple_pole_transforms(draw):
    n = draw(st.integers(1, 5))
    poles = draw(st.lists(st.floats(0.2, 8), min_size=n, max_size=n, unique=True))
    if n > 1 and np.min(np.diff(np.sort(poles))) < 0.05:
        poles = [0.2 + 0.5 * i for i in range(n)]
    num = draw(st.lists(st.floats(-3, 3), min_size=1, max_size=n))
    return np.asarray(num), -np.asarray(poles)


@given(simple_pole_transforms())
def test_residues_match_scipy(case):
    num, poles = case
    den = np.polynomial.polynomial.polyfromroots(poles)
    f = RationalLaplace(num, [den])
    # scipy.signal.residue is an independent partial-fraction routine (descending coefficients)
    r, p, _ = signal.residue(num[::-1], den[::-1])
    t = np.linspace(0, 4, 17)
    ref = np.real(np.exp(np.outer(t, p)) @ r)
    got = eval_exp_sum(partial_fractions(f), t)
    np.testing.assert_allclose(got, ref, atol=1e-9 * (1 + np.max(np.abs(ref))))


@given(st.floats(0.3, 3.0), st.integers(2, 4))
def test_repeated_pole_closed_form(a, m):
    f = RationalLaplace([1], [[a, 1]] * m)
    t = np.linspace(0, 6, 13)
    exact = t ** (m - 1) / math.factorial(m - 1) * np.exp(-a * t)
    np.testing.assert_allclose(eval_exp_sum(partial_fractions(f), t), exact, atol=1e-9)


@given(simple_pole_transforms())
def test_talbot_agrees_with_partial_fractions(case):
    num, poles = case
    f = RationalLaplace(num, [np.polynomial.polynomial.polyfromroots(poles)])
    t = np.linspace(0.1, 5, 11)
    pf = eval_exp_sum(partial_fractions(f), t)
    np.testing.assert_allclose(talbot_invert(f, t), pf, atol=1e-7 * (1 + np.max(np.abs(pf))))
