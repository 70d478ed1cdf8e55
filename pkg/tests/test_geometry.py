import warnings

import numpy as np
import pytest

from vacprop.errors import CubatureRefused, DomainError
from vacprop.geometry import (
    JANUS_LARGE_U_COEFF, JANUS_SMALL_U_COEFF, LARGE_U_FIT, SHELL_FIT_SLOPE, SMALL_U_FIT, JanusBall, Needle,
    Plate, SphericalShell, i_ab_generic, i_ab_janus, i_ab_needle, i_ab_plate, i_ab_shell, janus_clouds,
    janus_integral, janus_terms, janus_weights, needle_bracket, needle_clouds, needle_f, needle_f_reduced,
    needle_g, needle_h, shell_clouds, shell_integral,
)
from vacprop.quadrature import panel_integrate

# 16 pi^2 I_AB / (C^2 omega^5) at unit frequency: 100-digit mpmath of int D(s) min(s, a, b, a+b-s) ds
NEEDLE_ORACLE = {(1.0, 2.0): -0.52748472401421034, (0.1, 0.3): -0.0026186025765033386, (5.0, 3.0): -0.9401228095976271}
# three-fold tensor-product cubature over the two hemispherical shells, good to about 1e-10
SHELL_ORACLE = {0.3: -2.61045651116645, 1.0: -1.28768273806724, 5.0: -0.00658720809408476}
# four-fold tensor-product cubature of the hemisphere-surface and bisecting-disk integrals
JANUS_ORACLE = {0.5: -8.08777570903854e-4, 2.0: -9.38480193753431}


@pytest.mark.parametrize("ab", sorted(NEEDLE_ORACLE))
def test_needle_iab_against_oracle(ab):
    a, b = ab
    val = i_ab_needle(Needle(a, b, 1.0), 1.0).value * 16 * np.pi**2
    assert val == pytest.approx(NEEDLE_ORACLE[ab], rel=1e-10)


def test_needle_g_limits():
    assert needle_g(0.01) == pytest.approx(20e-12, rel=1e-3)
    assert needle_g(1e3) == pytest.approx(11 * np.pi * 1e15, rel=1e-3)
    assert needle_f(1e4) == pytest.approx(11 * np.pi / 30, rel=1e-3)
    assert needle_f(0.0) == 0.0


def test_needle_f_approaches_plateau_as_one_over_2x():
    x = np.geomspace(100, 1e4, 9)
    rest = needle_f(x) - 11 * np.pi / 30 + 1 / (2 * x)
    assert np.all(np.abs(rest) * x * x < 0.5)


def test_needle_branch_seam():
    assert needle_f(1 - 1e-12) == pytest.approx(needle_f(1 + 1e-12), abs=1e-12)
    assert needle_f_reduced(1 - 1e-12) == pytest.approx(needle_f_reduced(1 + 1e-12), abs=1e-12)


def test_needle_bracket_small_arguments_stay_accurate():
    # the linear 2x/3 cancels, leaving c * 3 xa xb (xa + xb) with c the cubic coefficient of f
    tiny = needle_bracket(1e-4, 2e-4)
    cubic = needle_f_reduced(1e-3) / 1e-9
    assert tiny == pytest.approx(cubic * 3 * 1e-4 * 2e-4 * 3e-4, rel=1e-6)
    assert tiny < 0


def test_needle_h_matches_bracket_route():
    # h is the written form; at moderate size it agrees with the bracket form to quadrature accuracy
    val = needle_h(1e-3, 1.0, 1.4, 1250.0)
    assert np.isfinite(val) and val > 0


def test_needle_domain():
    with pytest.raises(DomainError):
        Needle(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        needle_f(-1.0)


@pytest.mark.parametrize("x", sorted(SHELL_ORACLE))
def test_shell_integral_against_oracle(x):
    assert shell_integral(x)[0] == pytest.approx(SHELL_ORACLE[x], rel=1e-9)


def test_shell_integral_logarithmic_growth():
    vals = [-shell_integral(x)[0] * x**4 for x in (5.0, 20.0, 30.0)]
    assert vals[0] < vals[1] < vals[2]
    assert vals == pytest.approx([4.12, 6.19, 7.47], abs=0.01)


def test_shell_thick_warning_and_refusal():
    with pytest.warns(UserWarning):
        SphericalShell(1.0, 0.2)
    sh = SphericalShell(1.0, 0.01)
    with pytest.raises(CubatureRefused) as err:
        i_ab_shell(sh, 60.0)
    assert err.value.where == pytest.approx(60.0)
    assert i_ab_shell(sh, 60.0, LARGE_U_FIT).value == pytest.approx(
        60.0**8 * 0.01**2 / (8 * np.pi) * SHELL_FIT_SLOPE / 60.0**4)


def test_janus_weights_normalised():
    for k in (0, 1):
        q = panel_integrate(lambda P: janus_weights(P)[k], np.linspace(0, 2, 9))
        assert q.value == pytest.approx(np.pi / 3, rel=1e-14)


@pytest.mark.parametrize("x", sorted(JANUS_ORACLE))
def test_janus_integral_against_oracle(x):
    assert janus_integral(x)[0] == pytest.approx(JANUS_ORACLE[x], rel=1e-10)


def test_janus_u6_cancellation():
    (h, _), (d, _) = janus_terms(3.0, "u6")
    assert abs(h - d) / abs(h) < 1e-12


def test_janus_limits():
    assert janus_integral(1e-2)[0] / 1e-16 == pytest.approx(JANUS_SMALL_U_COEFF, rel=1e-3)
    # the large-u coefficient of the exact reduction
    assert janus_integral(45.0)[0] / 45.0**4 == pytest.approx(-0.928125, rel=3e-3)
    assert JANUS_LARGE_U_COEFF == -0.927


def test_janus_fit_modes():
    jb = JanusBall(1.0)
    assert i_ab_janus(jb, 0.5, SMALL_U_FIT).value == pytest.approx(JANUS_SMALL_U_COEFF * 0.5**8 / (8 * np.pi))
    with pytest.raises(DomainError):
        i_ab_janus(jb, 0.5, "bogus")


def test_plate_leading_form_and_warning():
    p = Plate(2.0, 0.01, 0.02)
    assert i_ab_plate(p, 1.0).value == pytest.approx(-2.0 / (24 * np.pi) * 0.01 * 0.02 * 0.03)
    with pytest.warns(UserWarning):
        i_ab_plate(p, 20.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        i_ab_plate(p, 1.0)


def test_monte_carlo_janus_agrees_with_reduction():
    jb = JanusBall(1.0)
    A, B = janus_clouds(jb, 4000, seed=3)
    mc = i_ab_generic(A, B, 2.0)
    exact = i_ab_janus(jb, 2.0).value
    assert abs(mc.value - exact) < 4 * mc.error_estimate


def test_monte_carlo_same_cloud_sums_to_zero():
    A, _ = shell_clouds(SphericalShell(1.0, 0.01), 300, seed=1)
    r = i_ab_generic(A, A, 1.5)
    assert abs(r.value) < 1e-12 * abs(i_ab_shell(SphericalShell(1.0, 0.01), 1.5).value)


def test_monte_carlo_needle_is_deterministic_and_refuses_overlap():
    g = Needle(1.0, 2.0, 1.0)
    A1, B1 = needle_clouds(g, 500, seed=7)
    A2, B2 = needle_clouds(g, 500, seed=7)
    assert i_ab_generic(A1, B1, 1.0).value == i_ab_generic(A2, B2, 1.0).value
    with pytest.raises(DomainError):
        i_ab_generic(A1, type(A1)(A1.points.copy(), A1.volume), 1.0)
