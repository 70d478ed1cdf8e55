"""Acceptance criteria 1-10, one test and one printed verdict line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
All quantities use the reference unit convention (300 K = 1/40 eV, hbar c = 2e-5 eV cm).
"""
import sys
import time
from dataclasses import dataclass

import numpy as np
import pytest

from vacprop import dynamics as d
from vacprop import forces as fo
from vacprop import validation as va
from vacprop.geometry import (
    JANUS_SMALL_U_COEFF, SHELL_FIT_SLOPE, JanusBall, Needle, Plate, SphericalShell, janus_integral, janus_terms,
    shell_integral,
)
from vacprop.kernel import delta_trace
from vacprop.materials import GOLD, Constant, Drude, Lorentz, ThermalPair, x_ab
from vacprop.units import REFERENCE_UNITS as U

DRUDE = GOLD.model
T300 = U.temperature(300.0)
HOT = ThermalPair.from_kelvin(300.0, 600.0, U)


@dataclass
class Part:
    label: str
    value: float
    target: float
    rule: str
    ok: bool


def rel_part(label, value, target, tol):
    return Part(label, value, target, f"rel {tol:g}", abs(value / target - 1) <= tol)


def factor_part(label, value, target, factor):
    ok = value * target > 0 and max(value / target, target / value) <= factor
    return Part(label, value, target, f"factor {factor:g}", ok)


def bound_part(label, value, limit):
    return Part(label, value, limit, "<=", value <= limit)


def verdict(report, n, title, parts):
    ok = all(p.ok for p in parts)
    body = "; ".join(f"{p.label} {p.value:.4g} vs {p.target:.4g} ({p.rule}){'' if p.ok else ' MISS'}"
                     for p in parts)
    report(f"criterion {n} {'PASS' if ok else 'FAIL'} [{title}] {body}")
    assert ok, body


def test_criterion_1_needle_plateau(acceptance_report):
    start = time.perf_counter()
    big = fo.force_needle(Needle.from_cm(10.0, 10.0, 0.1, U), 1.0, DRUDE, HOT, U).fhat
    bigger = fo.force_needle(Needle.from_cm(100.0, 100.0, 0.1, U), 1.0, DRUDE, HOT, U).fhat
    elapsed = time.perf_counter() - start
    verdict(acceptance_report, 1, "needle plateau", [
        rel_part("F-hat(a=b=10 cm)", big, 1.53e18, 0.05),
        rel_part("plateau reached (a=b=100 cm)", bigger, big, 1e-3),
        bound_part("runtime s", elapsed, 60.0),
    ])


def test_criterion_2_needle_prefactor(acceptance_report):
    g = Needle.from_cm(1.0, 1.0, 0.1, U)
    pref = U.to_newtons(fo.needle_prefactor(g, 1.0, DRUDE, U))
    verdict(acceptance_report, 2, "needle prefactor", [rel_part("|prefactor| N", abs(pref), 1.9e-20, 0.10)])


def test_criterion_3_shell_fit(acceptance_report):
    x = np.linspace(5.0, 30.0, 26)
    script_i = np.array([shell_integral(v)[0] for v in x])
    slope = float(np.sum(script_i * x**-4) / np.sum(x**-8))  # least squares through the origin
    sh = SphericalShell(U.length(1.0), 2 / DRUDE.omega_p)
    pref = U.to_newtons(fo.shell_prefactor(sh, 1.0, DRUDE))
    verdict(acceptance_report, 3, "shell fit", [
        rel_part("cubature slope on [5,30]", slope, SHELL_FIT_SLOPE, 0.25),
        rel_part("-I(20) 20^4", -shell_integral(20.0)[0] * 20.0**4, -SHELL_FIT_SLOPE, 0.20),
        rel_part("prefactor N", pref, 1.2e-12, 0.10),
    ])


def test_criterion_4_janus_fits(acceptance_report):
    small = janus_integral(0.5)[0] / (JANUS_SMALL_U_COEFF * 0.5**8)
    large = janus_integral(20.0)[0] / (-0.927 * 20.0**4)
    (h, _), (dk, _) = janus_terms(3.0, "u6")
    verdict(acceptance_report, 4, "janus fits", [
        rel_part("cubature/small fit at 0.5", small, 1.0, 0.05),
        rel_part("cubature/large fit at 20", large, 1.0, 0.10),
        bound_part("u^6 cancellation", abs(h - dk) / abs(h), 1e-6),
    ])


def test_criterion_5_janus_anchors(acceptance_report):
    pref = U.to_newtons(fo.janus_prefactor(JanusBall.from_cm(1e-4, U), 1.0, DRUDE))
    cold = fo.janus_fhat(DRUDE.nu, 0.0, T300)
    verdict(acceptance_report, 5, "janus anchors", [
        rel_part("prefactor N (a=1 um)", pref, 3.84e-18, 0.05),
        rel_part("F-hat(T=0, T'=300 K)", cold, -15.0, 0.10),
    ])


def test_criterion_6_plate(acceptance_report):
    p = Plate.from_cm(1.0, 1e-6, 1e-6, U)
    pref = U.to_newtons(fo.plate_prefactor(p, DRUDE))
    closed = fo.force_plate(p, DRUDE, HOT, U).fhat
    quad = fo.fhat_moment_quadrature(5, DRUDE.nu, HOT)[0]
    verdict(acceptance_report, 6, "plate", [
        factor_part("prefactor N", pref, 1e-13, 2.0),
        rel_part("F-hat closed vs quadrature", closed, quad, 1e-8),
    ])


def test_criterion_7_friction(acceptance_report):
    J = d.needle_friction_x_integral(0.7)
    g = Needle.from_cm(1.0, 1.0, 1e-6, U)
    prop = fo.force_needle(g, 1.0, DRUDE, HOT, U)
    fprime = d.needle_friction_derivative(g.cross_section_C, g.b, DRUDE, T300)
    v_T = U.to_m_per_s(d.terminal_velocity_friction(prop, fprime))
    t0 = U.to_seconds(d.friction_time_constant(d.rod_mass(GOLD, g.cross_section_C, g.b, U), fprime))
    verdict(acceptance_report, 7, "friction", [
        rel_part("x-integral at 0.7", J, 0.90, 0.01),
        rel_part("|v_T| m/s", abs(v_T), 4.0, 0.30),
        factor_part("t0 s", t0, 5e8, 2.0),
    ])


def _janus_cooling(ratio):
    geom = JanusBall.from_cm(1e-5, U)
    pref = fo.janus_prefactor(geom, 1.0, DRUDE)
    mass = d.half_ball_mass(GOLD, geom.radius_a, U)
    model = d.cooling_model("debye", GOLD, U)
    tr = d.terminal_velocity_cooling(lambda Tb: pref * fo.janus_fhat(DRUDE.nu, T300, Tb),
                                     model, mass, T300, ratio * T300)
    return tr, pref


def test_criterion_8_cooling(acceptance_report):
    debye = d.cooling_model("debye", GOLD, U)
    weak = d.cooling_model("weak", GOLD, U)
    tr2, pref = _janus_cooling(2)
    tr10, _ = _janus_cooling(10)
    integral = tr2.terminal_velocity * tr2.mass / (pref * tr2.t_c)
    um = 1e6 * U.to_m_per_s(1.0)
    force0 = pref * fo.janus_fhat(DRUDE.nu, T300, 2 * T300)
    no_cool = d.no_cooling_velocity(force0, U.from_seconds(2000.0), tr2.mass)
    verdict(acceptance_report, 8, "cooling", [
        rel_part("t_c Debye s", U.to_seconds(debye.t_c(T300)), 2000.0, 0.10),
        rel_part("t_c weak s", U.to_seconds(weak.t_c(T300)), 2e-4, 0.10),
        rel_part("int F-hat dtau", integral, -15.6, 0.10),
        rel_part("v_T um/s", tr2.terminal_velocity * um, -300.0, 0.20),
        rel_part("|v| no cooling, 2000 s, um/s", abs(no_cool * um), 1800.0, 0.20),
        rel_part("v_T ratio T0'=10T", tr10.terminal_velocity / tr2.terminal_velocity, 9.0, 0.30),
        rel_part("equilibration time ratio", tr2.equilibration_time / tr10.equilibration_time, 20.0, 0.30),
    ])


def test_criterion_9_appendix_equivalences(acceptance_report):
    names = [f"friction-momentum-vs-coordinate-v{v}" for v in (0.01, 0.1, 0.5)] + [
        "friction-r-asymptote", "friction-second-to-first-order-ratio", "mirror-force-to-power-ratio"]
    checks = {c.name: c for c in va.CHECKS}
    parts = []
    for name in names:
        r = checks[name].evaluate()
        parts.append(Part(name, r.value, r.reference, f"{r.measure} {r.tolerance:g}", r.passed))
    verdict(acceptance_report, 9, "appendix equivalences", parts)


def test_criterion_10_invariants(acceptance_report):
    rng = np.random.default_rng(0)
    models = [Constant(1.3), DRUDE, Lorentz(0.1, 0.05, 0.01), Drude(3.0, 0.2)]
    w = rng.uniform(1e-3, 10.0, 200)
    antisym = max(float(np.max(np.abs(x_ab(a, b, w) + x_ab(b, a, w)))) for a in models for b in models)
    u = np.concatenate([np.geomspace(1e-6, 1e3, 400), rng.uniform(0, 50, 400)])
    delta_min = float(np.min(delta_trace(u)))
    suites = [c for c in va.CHECKS if c.suite in ("forces", "radiation", "specfun", "kernel", "cooling")]
    failed = [c.name for c in suites if not c.evaluate().passed]
    verdict(acceptance_report, 10, "invariant suite", [
        bound_part("max |X_AB + X_BA|", antisym, 0.0),
        Part("min Delta(u)", delta_min, 0.0, ">=", delta_min >= 0.0),
        Part(f"registered invariant checks failing (of {len(suites)})", len(failed), 0, "==", not failed),
    ])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
