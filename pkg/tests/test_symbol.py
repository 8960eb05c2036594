import math

import numpy as np
import pytest

from szego_lab import expr as ex
from szego_lab.errors import DomainError, ParseError
from szego_lab.moments import MomentSpace
from szego_lab.symbol import (ANGLE, AT_R, EXPLICIT, EXTRAPOLATED, GENERAL, RADIAL, BoundarySymbol,
                              Symbol, angular_coefficient, as_symbol, boundary_average,
                              boundary_level_measure, classify, fourier_coefficients, radial_limit)

BERGMAN = MomentSpace.bergman()
FOCK = MomentSpace.fock()


@pytest.mark.parametrize("text, kind", [
    ("cos(theta)", ANGLE), ("1", ANGLE), ("pi", ANGLE),
    ("r^2", RADIAL), ("exp(-r)", RADIAL),
    ("x", GENERAL), ("r*theta", GENERAL), ("x^2 + y^2", GENERAL),
])
def test_classification(text, kind):
    assert classify(ex.parse(text)) == kind
    assert as_symbol(text).classification == kind


def test_unknown_identifier():
    with pytest.raises(ParseError, match="unknown identifier 'thetaa'"):
        Symbol.from_text("cos(thetaa)")


def test_derived_coordinates():
    s = as_symbol("x^2 + y^2 - r^2")
    r = np.linspace(0, 1, 7)[:, None]
    t = np.linspace(0, 6, 5)[None, :]
    np.testing.assert_allclose(s(r, t), 0.0, atol=1e-15)


def test_theta_is_reduced_mod_two_pi():
    s = as_symbol("theta")
    assert s(1.0, -0.5) == pytest.approx(2 * math.pi - 0.5)


def test_fourier_coefficients_of_trig_polynomial():
    M = 64
    t = 2 * np.pi * np.arange(M) / M
    v = 3 + 2 * np.cos(t) + 4 * np.sin(3 * t)
    c = fourier_coefficients(v, 5)
    np.testing.assert_allclose(c, [3, 1, 0, -2j, 0, 0], atol=1e-14)
    with pytest.raises(DomainError):
        fourier_coefficients(v, 32)


def test_angular_coefficient():
    assert angular_coefficient("x", 1, 0.5) == pytest.approx(0.25, abs=1e-15)
    assert angular_coefficient("x", -1, 0.5) == pytest.approx(0.25, abs=1e-15)
    assert angular_coefficient("r*sin(2*theta)", 2, 1.0) == pytest.approx(-0.5j, abs=1e-15)


def test_radial_limit_strategies():
    b = radial_limit("x", BERGMAN)
    assert b.provenance == AT_R
    assert b(0.3) == pytest.approx(math.cos(0.3))
    assert radial_limit("cos(theta)", FOCK).provenance == AT_R
    e = radial_limit("1 - exp(-r)", FOCK)
    assert e.provenance == EXTRAPOLATED and e(0.0) == pytest.approx(1.0, abs=1e-9)
    assert radial_limit("x", FOCK, boundary="cos(theta)").provenance == EXPLICIT
    with pytest.raises(DomainError, match="explicit boundary"):
        radial_limit("x", FOCK)
    with pytest.raises(DomainError):
        radial_limit("log(1 - r)", BERGMAN)


def test_boundary_average_and_level_measure():
    assert boundary_average("cos(theta)", "x^2") == pytest.approx(0.5, abs=1e-15)
    assert boundary_average("2", "x") == 2.0
    assert boundary_level_measure("cos(theta)", 0.0, 2.0) == pytest.approx(0.5, abs=1e-3)
    assert boundary_level_measure("theta", math.pi / 2, math.pi) == pytest.approx(0.25, abs=1e-3)
    with pytest.raises(DomainError):
        boundary_level_measure("theta", 1.0, 0.0)


def test_range_estimate():
    lo, hi = as_symbol("x").range(BERGMAN)
    assert lo == pytest.approx(-1, abs=1e-12) and hi == pytest.approx(1, abs=1e-12)
    assert BoundarySymbol.from_text("sin(theta)").range() == pytest.approx((-1, 1), abs=1e-6)
