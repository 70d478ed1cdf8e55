import numpy as np
import pytest

from vacprop.errors import DomainError, UnsupportedVariantError
from vacprop.materials import (
    BlackbodySurface, Constant, Drude, Lorentz, ThermalPair, bose, bose_diff, eval_chi, polystyrene,
    preset, skin_depth, x_ab,
)
from vacprop.units import DEFAULT_UNITS, REFERENCE_UNITS, UnitSystem


def test_reference_units_put_room_temperature_at_beta0():
    assert REFERENCE_UNITS.temperature(300.0) == pytest.approx(1 / 40, rel=1e-15)
    assert DEFAULT_UNITS.temperature(300.0) == pytest.approx(0.025852, rel=1e-4)


def test_length_round_trip_and_size_ratio():
    u = DEFAULT_UNITS
    assert u.length(1.0) == pytest.approx(5e4)
    assert u.to_cm(u.length(0.37)) == pytest.approx(0.37, rel=1e-15)
    assert u.size_ratio == pytest.approx(1250.0)


def test_time_and_force_conversions():
    u = DEFAULT_UNITS
    assert u.to_seconds(u.from_seconds(2000.0)) == pytest.approx(2000.0)
    # 1 eV^2 = 1 eV / (2e-5 cm) = 1.602e-19 J / 2e-7 m
    assert u.to_newtons(1.0) == pytest.approx(1.602176634e-19 / 2e-7)


def test_invalid_unit_system():
    with pytest.raises(ValueError):
        UnitSystem(hbar_c_eV_cm=0.0)


def test_drude_values_and_passivity():
    d = Drude(9.0, 0.035)
    w = np.geomspace(1e-4, 10, 50)
    chi = eval_chi(d, w)
    assert np.all(chi.imag > 0)
    assert chi[0] == pytest.approx(-81 / (1e-8 + 1j * 1e-4 * 0.035))


def test_lorentz_static_limit():
    lz = Lorentz(2.0, 1.0, 0.1)
    assert lz.static_chi == 4.0
    assert eval_chi(lz, 1e-9).real == pytest.approx(4.0, rel=1e-12)


def test_polystyrene_scales_with_beta0():
    ps = polystyrene(REFERENCE_UNITS).model
    assert ps.omega0 == pytest.approx(6.0)
    assert ps.gamma == pytest.approx(0.65)
    assert ps.static_chi == pytest.approx(1.5)


def test_x_ab_is_zero_for_identical_and_antisymmetric():
    d, lz = Drude(9.0, 0.035), Lorentz(2.0, 1.0, 0.1)
    w = np.linspace(0.01, 3, 40)
    assert np.all(x_ab(d, d, w) == 0.0)
    np.testing.assert_array_equal(x_ab(d, lz, w), -x_ab(lz, d, w))


def test_constant_against_drude_sign():
    # chi_A real positive, metal lossy: X_AB = -chi_A Im chi_B < 0
    w = np.linspace(0.01, 1, 10)
    assert np.all(x_ab(Constant(1.0), Drude(9.0, 0.035), w) < 0)


def test_skin_depth_gold_room_temperature():
    d = preset("gold").model
    # omega = T at 300 K in reference units: ~ 4e-6 cm
    val = skin_depth(d, 0.025, REFERENCE_UNITS)
    assert 1e-6 < val < 1e-5
    with pytest.raises(UnsupportedVariantError):
        skin_depth(Constant(1.0), 1.0)


def test_bose_limits():
    assert bose(1.0, 0.0) == 0.0
    assert bose(1e4, 1.0) == 0.0
    assert bose(1e-8, 1.0) == pytest.approx(1e8, rel=1e-7)
    pair = ThermalPair(1.0, 1.0)
    assert bose_diff(0.3, pair) == 0.0


def test_thermal_pair_validation():
    with pytest.raises(DomainError):
        ThermalPair(-1.0, 1.0)
    with pytest.raises(DomainError):
        ThermalPair(0.0, 0.0)
    assert ThermalPair(1.0, 1.0).equilibrium


def test_blackbody_has_no_bulk_chi():
    with pytest.raises(UnsupportedVariantError):
        eval_chi(BlackbodySurface(), 1.0)


def test_unknown_preset():
    with pytest.raises(KeyError):
        preset("unobtainium")


def test_gold_densities_consistent():
    g = preset("gold")
    per_atom = g.mass_density(DEFAULT_UNITS) / g.number_density(DEFAULT_UNITS)
    assert per_atom / g.atomic_mass == pytest.approx(1.0, rel=2e-3)
