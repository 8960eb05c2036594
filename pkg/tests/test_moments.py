import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from szego_lab.errors import DomainError
from szego_lab.moments import (MomentSpace, RadialMeasure, mass_below, order_bucket,
                               radial_expectation)


@pytest.fixture(scope="module")
def bergman():
    return MomentSpace.bergman()


@pytest.fixture(scope="module")
def fock():
    return MomentSpace.fock()


def test_bergman_closed_form(bergman):
    n = np.arange(1001)
    np.testing.assert_allclose(bergman.log_moments(1000), np.log(2.0 / (n + 1)), atol=1e-14)


def test_fock_closed_form(fock):
    n = np.arange(301)
    ref = [math.lgamma((k + 1) / 2) for k in n]
    np.testing.assert_allclose(fock.log_moments(300), ref, atol=1e-12)


def test_custom_matches_bergman(bergman):
    sp = MomentSpace.custom("2", 1.0)
    np.testing.assert_allclose(sp.log_moments(512), bergman.log_moments(512), atol=1e-12)


def test_custom_matches_fock(fock):
    sp = MomentSpace.custom("2*exp(-r^2)", "inf")
    np.testing.assert_allclose(sp.log_moments(300), fock.log_moments(300), atol=1e-10)


def test_custom_polynomial_weight():
    # mu = 4 (1 - r^2) on [0, 1]: c_n = 8 / ((n+1)(n+3))
    sp = MomentSpace.custom("4*(1 - r^2)", 1.0)
    n = np.arange(200)
    np.testing.assert_allclose(sp.log_moments(199), np.log(8.0 / ((n + 1) * (n + 3))), atol=1e-11)


@pytest.mark.parametrize("space", ["bergman", "fock"])
@pytest.mark.parametrize("n", [0, 1, 7, 100, 1000])
def test_measures_are_probability(space, n, request):
    sp = request.getfixturevalue(space)
    assert RadialMeasure(sp, n).mass() == pytest.approx(1.0, abs=1e-11)


def test_expectation_oracle(bergman):
    # int r^2 dmu_n = (n+1)/(n+2) on the Bergman space
    for n in (0, 3, 50):
        assert radial_expectation(RadialMeasure(bergman, n), "r^2") == pytest.approx((n + 1) / (n + 2),
                                                                                     rel=1e-13)


def test_mass_below(bergman, fock):
    for n in range(31):
        assert mass_below(RadialMeasure(bergman, n), 0.5) == pytest.approx(0.5 ** (2 * n + 2),
                                                                           rel=1e-12)
    assert mass_below(RadialMeasure(fock, 0), 1.0) == pytest.approx(1 - math.exp(-1), abs=1e-12)
    with pytest.raises(DomainError):
        mass_below(RadialMeasure(bergman, 0), 1.5)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 300), st.integers(1, 4))
def test_ratio_bounded_by_one(l, m):
    for sp in (MomentSpace.bergman(), MomentSpace.fock()):
        assert 0.0 < sp.moment_ratio(l, m) <= 1.0 + 1e-15


def test_fock_ratio_exact(fock):
    assert fock.moment_ratio(200, 2) == pytest.approx(math.sqrt(201 / 202), abs=1e-12)


def test_order_bucket():
    assert order_bucket(0) == 256
    assert order_bucket(255) == 256
    assert order_bucket(256) == 512
    assert order_bucket(2049) == 4096


@pytest.mark.parametrize("density, radius", [("-1", 1.0), ("2", -1.0), ("2", "big"),
                                             ("log(r - 2)", 1.0)])
def test_bad_custom_space(density, radius):
    with pytest.raises(DomainError):
        MomentSpace.custom(density, radius)


def test_unknown_identifier_in_density():
    with pytest.raises(DomainError, match="unknown identifier 'theta'"):
        MomentSpace.custom("theta", 1.0)


@pytest.mark.parametrize("density, radius", [("2", 1.0), ("1 + 0.9*cos(40*r)", 1.0),
                                             ("2*exp(-r^2)", "inf"), ("exp(-r)", "inf")])
def test_hypothesis_checks_quiet_on_valid_weights(density, radius):
    sp = MomentSpace.custom(density, radius, check=False)
    assert sp.check_hypotheses() == []
