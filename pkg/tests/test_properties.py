import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vacprop import cli
from vacprop import dynamics as d
from vacprop import forces as fo
from vacprop.geometry import Needle, i_ab_needle, needle_bracket
from vacprop.kernel import delta_deriv, delta_reduced
from vacprop.materials import GOLD, Constant, Drude, Lorentz, ThermalPair, bose_diff, x_ab
from vacprop.specfun import thermal_moment, thermal_moment_diff
from vacprop.units import REFERENCE_UNITS as U

T_ROOM = U.temperature(300.0)
pos = st.floats(1e-3, 1e3)
temps = st.floats(1.0, 3000.0)
models = st.one_of(
    st.builds(Constant, st.floats(0.1, 10.0)),
    st.builds(Drude, st.floats(1.0, 20.0), st.floats(1e-3, 1.0)),
    st.builds(Lorentz, st.floats(0.1, 10.0), st.floats(0.01, 5.0), st.floats(1e-3, 1.0)),
)


@given(models, models, st.floats(1e-4, 1e2))
def test_x_ab_antisymmetric(a, b, w):
    assert x_ab(a, b, w) == -x_ab(b, a, w)
    assert x_ab(a, a, w) == 0.0


@given(st.floats(1e-3, 50.0), st.floats(1e-3, 50.0))
def test_needle_bracket_symmetric_and_negative(xa, xb):
    v = needle_bracket(xa, xb)
    assert v == needle_bracket(xb, xa)
    assert v < 0


@given(st.floats(1e-3, 10.0), st.floats(1e-3, 10.0), st.floats(0.1, 10.0))
def test_needle_iab_scale_invariance(a, b, lam):
    # I_AB / omega^5 depends only on omega a and omega b
    r1 = i_ab_needle(Needle(a, b, 1.0), 1.0).value
    r2 = i_ab_needle(Needle(a * lam, b * lam, 1.0), 1.0 / lam).value * lam**5
    assert r2 == pytest.approx(r1, rel=1e-12, abs=1e-300)


@given(st.sampled_from([3, 5, 7]), temps, temps)
def test_thermal_moment_diff_antisymmetric(n, t1, t2):
    a = thermal_moment_diff(n, GOLD.model.nu, U.temperature(t1), U.temperature(t2))
    b = thermal_moment_diff(n, GOLD.model.nu, U.temperature(t2), U.temperature(t1))
    assert a == pytest.approx(-b, rel=1e-12, abs=1e-300)
    if t2 > t1:
        assert a < 0


@given(st.sampled_from([3, 5, 7]), st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_thermal_moment_decreases_with_y(n, y1, y2):
    lo, hi = sorted((y1, y2))
    if hi > lo * (1 + 1e-9):
        assert thermal_moment(n, hi) < thermal_moment(n, lo)


@given(st.floats(1e-4, 1e3), temps, temps)
def test_bose_diff_sign(w, t1, t2):
    dn = bose_diff(w, ThermalPair(U.temperature(t1), U.temperature(t2)))
    if t1 > t2:
        assert dn >= 0
    elif t1 < t2:
        assert dn <= 0


@given(st.floats(0.0, 200.0))
def test_kernel_pieces_finite(u):
    assert math.isfinite(delta_reduced(u)) and math.isfinite(delta_deriv(u))
    if 1e-300 < u < 1:
        assert delta_deriv(u) < 0


@settings(max_examples=30, deadline=None)
@given(st.floats(10.0, 2000.0), st.floats(10.0, 2000.0), st.floats(1e-7, 1e-3))
def test_janus_force_sign_follows_temperature(t_env, t_body, radius_cm):
    from vacprop.geometry import JanusBall
    geom = JanusBall.from_cm(radius_cm, U)
    r = fo.force_janus(geom, 1.0, GOLD.model, ThermalPair.from_kelvin(t_env, t_body, U), units=U)
    if t_body > t_env:
        assert r.force_natural < 0
    elif t_body < t_env:
        assert r.force_natural > 0
    else:
        assert r.force_natural == 0.0


@settings(max_examples=25, deadline=None)
@given(st.floats(1e-4, 0.5))
def test_first_order_friction_odd(v):
    spec = d.PolarizabilitySpectrum.from_volume(GOLD.model, U.length(1e-5) ** 3)
    eq = ThermalPair(T_ROOM, T_ROOM)
    up = d.friction_first_order(spec, eq, v)
    assert up < 0
    assert d.friction_first_order(spec, eq, -v) == pytest.approx(-up, rel=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.floats(1.05, 5.0), st.floats(0.05, 0.95))
def test_cooling_time_is_additive(u_from, frac):
    model = d.cooling_model("debye", GOLD, U)
    u_mid = 1.01 + frac * (u_from - 1.01)
    t = d.cooling_time(model, T_ROOM, u_from * T_ROOM, 1.01 * T_ROOM)
    t1 = d.cooling_time(model, T_ROOM, u_from * T_ROOM, u_mid * T_ROOM)
    t2 = d.cooling_time(model, T_ROOM, u_mid * T_ROOM, 1.01 * T_ROOM)
    assert t1 + t2 == pytest.approx(t, rel=1e-10)


@given(st.floats(0.0, 300.0))
def test_r_function_bounds(t):
    # sin^2(st)/s^2 <= t^2, and the bare weight integrates to (4/15)(4/3)
    r = d.r_function(t)
    assert 0.0 <= r <= 16 * t * t / 45 * (1 + 1e-12)


@given(st.floats(1e-12, 1e12))
def test_unit_round_trips(x):
    assert U.to_seconds(U.from_seconds(x)) == pytest.approx(x, rel=1e-14)
    assert U.to_cm(U.length(x)) == pytest.approx(x, rel=1e-14)
    assert U.to_kelvin(U.temperature(x)) == pytest.approx(x, rel=1e-14)


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.lists(st.tuples(finite, finite, st.sampled_from(["cubature", "small_u_fit"])), min_size=1, max_size=5))
def test_csv_round_trip_is_exact(rows):
    table = [{c: x for c in cli.FORCE_COLUMNS} for x, _, _ in rows]
    for rec, (_, y, mode) in zip(table, rows):
        rec["fhat"] = y
        rec["mode"] = mode
    back = cli.read_table(cli.render(table, cli.FORCE_COLUMNS, "csv"), "force")
    assert back == table
