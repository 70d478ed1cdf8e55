import numpy as np
import pytest

from vacprop.errors import DomainError
from vacprop.specfun import (
    ThermalMomentSpec, Y_SWITCH, digamma, sine_integral, thermal_moment, thermal_moment_closed,
    thermal_moment_diff,
)

# 30-digit mpmath quadrature of int x^n/(x^2+1)/(e^{xy}-1) dx
J_ORACLE = {
    (3, 0.5): 4.4769451158006035413, (3, 1.4): 0.33770677240992445627, (3, 15.0): 0.00011909304359406258663,
    (5, 0.5): 99.426085320468662844, (5, 1.4): 1.3527189362184671381, (5, 15.0): 9.182302623553791621e-6,
    (7, 0.5): 7713.7686307201007302, (7, 1.4): 14.860918589139522619, (7, 15.0): 1.5353856014675655711e-6,
}


@pytest.mark.parametrize("key", sorted(J_ORACLE))
def test_thermal_moment_against_oracle(key):
    n, y = key
    assert thermal_moment(n, y) == pytest.approx(J_ORACLE[key], rel=1e-12)


def test_branches_agree_at_switch():
    for n in (3, 5, 7):
        lo = thermal_moment(n, np.nextafter(Y_SWITCH, 0))
        hi = thermal_moment(n, Y_SWITCH)
        assert lo == pytest.approx(hi, rel=1e-9)


def test_vectorised_and_spec_wrapper():
    ys = np.array([0.5, 1.4, 15.0])
    np.testing.assert_allclose(thermal_moment(5, ys), [J_ORACLE[(5, y)] for y in ys], rtol=1e-12)
    assert thermal_moment_closed(ThermalMomentSpec(7, 1.4)) == thermal_moment(7, 1.4)


def test_thermal_moment_domain():
    with pytest.raises(DomainError):
        thermal_moment(4, 1.0)
    with pytest.raises(DomainError):
        ThermalMomentSpec(3, 0.0)
    assert thermal_moment(3, np.inf) == 0.0


def test_moment_difference_zero_temperature_and_equilibrium():
    assert thermal_moment_diff(7, 0.035, 0.0, 0.025) == pytest.approx(-J_ORACLE[(7, 1.4)], rel=1e-12)
    assert thermal_moment_diff(3, 0.035, 0.025, 0.025) == 0.0


def test_sine_integral_values():
    assert sine_integral(0.0) == 0.0
    assert sine_integral(1.0) == pytest.approx(0.94608307036718301494, rel=1e-15)
    assert sine_integral(-2.0) == -sine_integral(2.0)
    assert sine_integral(1e6) == pytest.approx(np.pi / 2, rel=1e-6)


def test_digamma_values():
    assert digamma(1.0) == pytest.approx(-0.5772156649015329, rel=1e-15)
    assert digamma(0.5) == pytest.approx(-1.9635100260214235, rel=1e-15)
    with pytest.raises(DomainError):
        digamma(0.0)
