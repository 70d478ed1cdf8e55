"""Print every quoted numerical anchor next to the value this library computes.

    python scripts/reproduce_anchors.py [--units reference|exact]

Reference units (300 K = 1/40 eV, hbar c = 2e-5 eV cm) are the convention the
quoted numbers were produced in; exact units use CODATA k_B and hbar c.
"""
import argparse

import numpy as np

from vacprop import dynamics as d
from vacprop import forces as fo
from vacprop.geometry import SHELL_FIT_SLOPE, JanusBall, Needle, Plate, SphericalShell, shell_integral
from vacprop.materials import GOLD, ThermalPair, polystyrene
from vacprop.specfun import thermal_moment_diff
from vacprop.units import DEFAULT_UNITS, REFERENCE_UNITS


def anchors(U):
    dr = GOLD.model
    T = U.temperature(300.0)
    hot = ThermalPair.from_kelvin(300.0, 600.0, U)
    um = 1e6 * U.to_m_per_s(1.0)
    rows = []

    def add(name, value, quoted):
        rows.append((name, value, quoted))

    add("needle F-hat plateau", fo.force_needle(Needle.from_cm(10, 10, 0.1, U), 1.0, dr, hot, U).fhat, 1.53e18)
    add("needle prefactor N (1 mm radius)", U.to_newtons(fo.needle_prefactor(Needle.from_cm(1, 1, 0.1, U), 1.0, dr, U)),
        -1.9e-20)
    x = np.linspace(5, 30, 26)
    si = np.array([shell_integral(v)[0] for v in x])
    add("shell slope s on [5,30]", float(np.sum(si * x**-4) / np.sum(x**-8)), SHELL_FIT_SLOPE)
    sh = SphericalShell(U.length(1.0), 2 / dr.omega_p)
    add("shell prefactor N", U.to_newtons(fo.shell_prefactor(sh, 1.0, dr)), 1.2e-12)
    add("janus prefactor N (a = 1 um)", U.to_newtons(fo.janus_prefactor(JanusBall.from_cm(1e-4, U), 1.0, dr)), 3.84e-18)
    add("janus F-hat(T=0, T'=300 K)", fo.janus_fhat(dr.nu, 0.0, T), -15.0)
    jb = JanusBall.from_cm(1e-5, U)
    add("dispersive janus F-hat / non-dispersive (polystyrene)",
        fo.force_janus_dispersive(jb, polystyrene(U).model, dr, hot, U).force_natural
        / fo.force_janus(jb, polystyrene(U).model.static_chi, dr, hot, units=U).force_natural, float("nan"))
    add("plate prefactor N (1 cm^2, 10 nm)", U.to_newtons(fo.plate_prefactor(Plate.from_cm(1, 1e-6, 1e-6, U), dr)), 1e-13)

    add("friction x-integral at 0.7", d.needle_friction_x_integral(0.7), 0.90)
    g = Needle.from_cm(1.0, 1.0, 1e-6, U)
    fp = d.needle_friction_derivative(g.cross_section_C, g.b, dr, T)
    add("needle v_T m/s", U.to_m_per_s(d.terminal_velocity_friction(fo.force_needle(g, 1.0, dr, hot, U), fp)), -4.0)
    add("needle t0 s", U.to_seconds(d.friction_time_constant(d.rod_mass(GOLD, g.cross_section_C, g.b, U), fp)), 5e8)

    debye, weak = d.cooling_model("debye", GOLD, U), d.cooling_model("weak", GOLD, U)
    add("t_c Debye s", U.to_seconds(debye.t_c(T)), 2000.0)
    add("t_c weak s", U.to_seconds(weak.t_c(T)), 2e-4)
    pref = fo.janus_prefactor(jb, 1.0, dr)
    mass = d.half_ball_mass(GOLD, jb.radius_a, U)
    force = lambda Tb: pref * fo.janus_fhat(dr.nu, T, Tb)  # noqa: E731
    tr2 = d.terminal_velocity_cooling(force, debye, mass, T, 2 * T)
    tr10 = d.terminal_velocity_cooling(force, debye, mass, T, 10 * T)
    add("janus cooling velocity prefactor um/s", pref * tr2.t_c / mass * um, 20.0)
    add("janus int F-hat dtau", tr2.terminal_velocity * mass / (pref * tr2.t_c), -15.6)
    add("janus v_T um/s", tr2.terminal_velocity * um, -300.0)
    add("janus v(0.1 t_c)/v_T", float(np.interp(0.1 * tr2.t_c, tr2.times, tr2.velocity)) / tr2.terminal_velocity,
        float("nan"))
    add("no-cooling velocity after 2000 s um/s",
        d.no_cooling_velocity(force(2 * T), U.from_seconds(2000.0), mass) * um, -1800.0)
    add("v_T ratio T0'=10T vs 2T", tr10.terminal_velocity / tr2.terminal_velocity, 9.0)
    add(f"equilibration time ratio ({d.EQUILIBRATION_FRACTION:.0%} of v_T)",
        tr2.equilibration_time / tr10.equilibration_time, 20.0)
    trw = d.terminal_velocity_cooling(force, weak, mass, T, 2 * T)
    add("janus weak velocity prefactor pm/s", pref * trw.t_c / mass * um * 1e6, 1.0)
    add("janus weak int F-hat dtau", trw.terminal_velocity * mass / (pref * trw.t_c), -100.0)
    ps = fo.shell_prefactor(sh, 1.0, dr)
    ms = d.half_shell_mass(GOLD, sh.radius_a, sh.thickness_t, U)
    trs = d.terminal_velocity_cooling(lambda Tb: ps * thermal_moment_diff(3, dr.nu, T, Tb), weak, ms, T, 2 * T)
    add("shell weak velocity prefactor m/s", U.to_m_per_s(ps * trs.t_c / ms), 4e-10)
    add("shell weak int F-hat dtau", trs.terminal_velocity * ms / (ps * trs.t_c), -0.4)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--units", choices=("reference", "exact"), default="reference")
    args = ap.parse_args()
    U = REFERENCE_UNITS if args.units == "reference" else DEFAULT_UNITS
    print(f"{'quantity':58s} {'computed':>12s} {'quoted':>10s} {'ratio':>8s}")
    for name, value, quoted in anchors(U):
        ratio = value / quoted if np.isfinite(quoted) else float("nan")
        q = f"{quoted:10.3g}" if np.isfinite(quoted) else f"{'-':>10s}"
        print(f"{name:58s} {value:12.4g} {q} {ratio:8.3f}")


if __name__ == "__main__":
    main()
