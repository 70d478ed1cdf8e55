"""Self-propulsive force F_z = (4/pi) int_0^inf X_AB(omega) [n(omega/T) - n(omega/T')] I_AB(omega) d omega.

T is the environment and T' the body temperature.  Negative forces point toward
the B (-z) half, which is the metal in every preset configuration.

Each specialised path factors the force as ``prefactor * fhat`` with a
dimensionless core that is either a closed form in thermal moments or a single
quadrature in a scaled frequency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedVariantError
from .geometry import (
    CUBATURE,
    LARGE_U_FIT,
    SHELL_FIT_SLOPE,
    SMALL_U_FIT,
    JanusBall,
    Needle,
    Plate,
    SphericalShell,
    iab_values,
    janus_clouds,
    needle_bracket,
    needle_clouds,
    shell_clouds,
)
from .kernel import delta_deriv
from .materials import (
    BlackbodySurface,
    Constant,
    Drude,
    Lorentz,
    ThermalPair,
    bose,
    eval_chi,
    x_ab,
)
from .quadrature import panel_integrate, panel_nodes, thermal_breaks
from .specfun import thermal_moment_diff
from .units import DEFAULT_UNITS, UnitSystem

# the Bose tail beyond this many T_max is below 1e-12 of any integrand used here
UPPER_IN_TMAX = 60.0


@dataclass(frozen=True)
class ForceResult:
    force_natural: float  # eV^2
    force_newtons: float
    fhat: float
    prefactor: float
    quadrature_error: float
    mode: str = "quadrature"

    @classmethod
    def build(cls, prefactor, fhat, error, mode, units: UnitSystem):
        f = prefactor * fhat
        return cls(f, units.to_newtons(f), fhat, prefactor, abs(error), mode)


def _zero(prefactor, mode, units):
    return ForceResult.build(prefactor, 0.0, 0.0, mode, units)


def _temperature_scales(thermal: ThermalPair):
    temps = [t for t in (thermal.T_env, thermal.T_body) if t > 0]
    return min(temps), max(temps)


def _material_scales(*models):
    out = []
    for m in models:
        if isinstance(m, Drude):
            out.append(m.nu)
        elif isinstance(m, Lorentz):
            out += [m.omega0, m.gamma]
    return out


def _x_eff(geom, model_a, model_b, omega):
    """X_AB, with a blackbody surface layer folded into the plate thickness."""
    bb_a = isinstance(model_a, BlackbodySurface)
    bb_b = isinstance(model_b, BlackbodySurface)
    if not (bb_a or bb_b):
        return x_ab(model_a, model_b, omega)
    if not isinstance(geom, Plate):
        raise UnsupportedVariantError("a blackbody surface can only be used on a plate")
    if bb_a and bb_b:
        return np.zeros_like(omega)
    if bb_a:
        if geom.t_A == 0:
            raise DomainError("blackbody layer needs a positive thickness")
        # Im chi_A = 1/(4 omega t_A), Re chi_A = 0
        return np.real(eval_chi(model_b, omega)) / (4 * omega * geom.t_A)
    if geom.t_B == 0:
        raise DomainError("blackbody layer needs a positive thickness")
    return -np.real(eval_chi(model_a, omega)) / (4 * omega * geom.t_B)


def force_generic(geom, model_a, model_b, thermal: ThermalPair, mode: str | None = None,
                  units: UnitSystem = DEFAULT_UNITS) -> ForceResult:
    """Direct frequency quadrature of the force for any supported geometry."""
    if thermal.equilibrium:
        return _zero(1.0, "quadrature", units)
    T_lo, T_hi = _temperature_scales(thermal)
    breaks = thermal_breaks(T_lo, T_hi, UPPER_IN_TMAX * T_hi,
                            extra=_material_scales(model_a, model_b),
                            lengths=geom.oscillation_lengths)

    def weighted(w):
        occ = np.asarray(bose(w, thermal.T_env)) - np.asarray(bose(w, thermal.T_body))
        weight = (4 / np.pi) * _x_eff(geom, model_a, model_b, w) * occ
        iab, err = iab_values(geom, w, mode)
        return weight * iab, np.abs(weight) * err

    nodes, wts = panel_nodes(breaks, 16)
    vals, errs = weighted(nodes)
    hi = float(np.sum(vals * wts))
    nodes10, wts10 = panel_nodes(breaks, 10)
    lo = float(np.sum(weighted(nodes10)[0] * wts10))
    # rule-difference estimate plus the propagated geometric-integral error
    error = abs(hi - lo) + float(np.sum(errs * wts))
    return ForceResult.build(1.0, hi, error, mode or "quadrature", units)


MONTE_CARLO = "monte_carlo"


def force_monte_carlo(geom, model_a, model_b, thermal: ThermalPair, n_points: int = 400, seed: int = 0,
                      units: UnitSystem = DEFAULT_UNITS) -> ForceResult:
    """Frequency quadrature with I_AB from paired uniform samples of the two halves.

    ``quadrature_error`` is the sum over nodes of |weight| times one standard error,
    so it also bounds correlated sampling errors.
    """
    makers = {Needle: needle_clouds, JanusBall: janus_clouds, SphericalShell: shell_clouds}
    if type(geom) not in makers:
        raise UnsupportedVariantError(f"no sampler for {type(geom).__name__}")
    if thermal.equilibrium:
        return _zero(1.0, MONTE_CARLO, units)
    A, B = makers[type(geom)](geom, n_points, seed)
    d = A.points - B.points
    R = np.linalg.norm(d, axis=-1)
    T_lo, T_hi = _temperature_scales(thermal)
    breaks = thermal_breaks(T_lo, T_hi, UPPER_IN_TMAX * T_hi, extra=_material_scales(model_a, model_b),
                            lengths=geom.oscillation_lengths)
    nodes, wts = panel_nodes(breaks, 16)
    w = nodes.ravel()
    occ = np.asarray(bose(w, thermal.T_env)) - np.asarray(bose(w, thermal.T_body))
    weight = (4 / np.pi) * _x_eff(geom, model_a, model_b, w) * occ * wts.ravel()
    scale = A.volume * B.volume / (16 * np.pi**2)
    k = w[:, None] ** 7 * delta_deriv(w[:, None] * R[None, :]) * (d[:, 2] / R)[None, :]
    mean = k.mean(axis=1)
    se = k.std(axis=1, ddof=1) / np.sqrt(len(R))
    value = scale * float(np.sum(weight * mean))
    error = scale * float(np.sum(np.abs(weight) * se))
    return ForceResult.build(1.0, value, error, MONTE_CARLO, units)


def fhat_moment_quadrature(n: int, nu: float, thermal: ThermalPair) -> tuple[float, float]:
    """int_0^inf x^n/(x^2+1) [n(x nu/T) - n(x nu/T')] dx by panel quadrature."""
    if thermal.equilibrium:
        return 0.0, 0.0
    T_lo, T_hi = _temperature_scales(thermal)
    breaks = thermal_breaks(T_lo / nu, T_hi / nu, UPPER_IN_TMAX * T_hi / nu, extra=(1.0,))

    def f(x):
        d = np.asarray(bose(x * nu, thermal.T_env)) - np.asarray(bose(x * nu, thermal.T_body))
        return x**n / (x * x + 1) * d

    q = panel_integrate(f, breaks)
    return q.value, q.error


def _require(model, kind, what):
    if not isinstance(model, kind):
        raise UnsupportedVariantError(f"{what} must be {kind.__name__}")


def _chi_a_value(chi_A) -> float:
    if isinstance(chi_A, Constant):
        return float(chi_A.chi)
    return float(chi_A)


# ---------------------------------------------------------------- needle


def needle_prefactor(geom: Needle, chi_A: float, drude: Drude, units: UnitSystem = DEFAULT_UNITS) -> float:
    return (-geom.cross_section_C**2 * drude.omega_p**2 * drude.nu * chi_A / (120 * np.pi**3)
            * units.beta0**2 / units.a0**5)


def needle_fhat(geom: Needle, drude: Drude, thermal: ThermalPair, units: UnitSystem = DEFAULT_UNITS):
    """F-hat^IN as a single integral over y = beta0 omega; returns (value, error)."""
    if thermal.equilibrium:
        return 0.0, 0.0
    b0 = units.beta0
    lam = b0 * drude.nu
    K = units.size_ratio
    T_lo, T_hi = _temperature_scales(thermal)
    breaks = thermal_breaks(T_lo * b0, T_hi * b0, UPPER_IN_TMAX * T_hi * b0, extra=(lam,),
                            lengths=[L / b0 for L in geom.oscillation_lengths])

    def f(y):
        w = y / b0
        d = np.asarray(bose(w, thermal.T_env)) - np.asarray(bose(w, thermal.T_body))
        return y**4 / (y * y + lam * lam) * d * needle_bracket(w * geom.a, w * geom.b)

    q = panel_integrate(f, breaks)
    return 30 * K**5 * q.value, 30 * K**5 * q.error


def force_needle(geom: Needle, chi_A, drude: Drude, thermal: ThermalPair,
                 units: UnitSystem = DEFAULT_UNITS) -> ForceResult:
    _require(drude, Drude, "the B half")
    chi = _chi_a_value(chi_A)
    pref = needle_prefactor(geom, chi, drude, units)
    fh, err = needle_fhat(geom, drude, thermal, units)
    return ForceResult.build(pref, fh, pref * err, "closed_form", units)


# ---------------------------------------------------------------- shell


def shell_prefactor(geom: SphericalShell, chi_A: float, drude: Drude, slope: float = SHELL_FIT_SLOPE) -> float:
    """-omega_p^2 t^2 a nu^3 chi_A s / (2 pi^2)."""
    return (-drude.omega_p**2 * geom.thickness_t**2 * geom.radius_a * drude.nu**3 * chi_A * slope
            / (2 * np.pi**2))


def force_shell(geom: SphericalShell, chi_A, drude: Drude, thermal: ThermalPair,
                mode: str = LARGE_U_FIT, units: UnitSystem = DEFAULT_UNITS) -> ForceResult:
    _require(drude, Drude, "the B half")
    chi = _chi_a_value(chi_A)
    pref = shell_prefactor(geom, chi, drude)
    if mode == LARGE_U_FIT:
        fh = thermal_moment_diff(3, drude.nu, thermal.T_env, thermal.T_body)
        return ForceResult.build(pref, float(fh), 0.0, mode, units)
    if mode != CUBATURE:
        raise DomainError(f"shell force mode must be {LARGE_U_FIT!r} or {CUBATURE!r}")
    g = force_generic(geom, Constant(chi), drude, thermal, mode=CUBATURE, units=units)
    return ForceResult.build(pref, g.force_natural / pref, g.quadrature_error, mode, units)


# ---------------------------------------------------------------- Janus ball


def janus_prefactor(geom: JanusBall, chi_A: float, drude: Drude) -> float:
    """chi_A omega_p^2 (nu a)^7 / (27 pi)."""
    return chi_A * drude.omega_p**2 * (drude.nu * geom.radius_a) ** 7 / (27 * np.pi)


def janus_fhat(nu: float, T_env, T_body):
    """Closed-form F-hat^JB, the x^7 thermal-moment difference."""
    return thermal_moment_diff(7, nu, T_env, T_body)


def force_janus(geom: JanusBall, chi_A, drude: Drude, thermal: ThermalPair,
                mode: str = SMALL_U_FIT, units: UnitSystem = DEFAULT_UNITS) -> ForceResult:
    _require(drude, Drude, "the B half")
    chi = _chi_a_value(chi_A)
    pref = janus_prefactor(geom, chi, drude)
    if mode == SMALL_U_FIT:
        return ForceResult.build(pref, float(janus_fhat(drude.nu, thermal.T_env, thermal.T_body)),
                                 0.0, mode, units)
    if mode not in (CUBATURE, LARGE_U_FIT):
        raise DomainError(f"unknown Janus force mode {mode!r}")
    g = force_generic(geom, Constant(chi), drude, thermal, mode=mode, units=units)
    return ForceResult.build(pref, g.force_natural / pref, g.quadrature_error, mode, units)


def janus_dispersive_prefactor(geom: JanusBall, lorentz: Lorentz, drude: Drude,
                               units: UnitSystem = DEFAULT_UNITS) -> float:
    return drude.omega_p**2 * lorentz.omega_pt**2 * geom.radius_a**7 * units.T0**5 / (27 * np.pi)


def force_janus_dispersive(geom: JanusBall, lorentz: Lorentz, drude: Drude, thermal: ThermalPair,
                           units: UnitSystem = DEFAULT_UNITS) -> ForceResult:
    """Small-ball force with a Lorentz oscillator on the A half."""
    _require(lorentz, Lorentz, "the A half")
    _require(drude, Drude, "the B half")
    pref = janus_dispersive_prefactor(geom, lorentz, drude, units)
    if thermal.equilibrium:
        return _zero(pref, SMALL_U_FIT, units)
    b0 = units.beta0
    lam, mu, y0 = b0 * drude.nu, b0 * lorentz.gamma, b0 * lorentz.omega0
    T_lo, T_hi = _temperature_scales(thermal)
    breaks = thermal_breaks(T_lo * b0, T_hi * b0, UPPER_IN_TMAX * T_hi * b0, extra=(lam, mu, y0))

    def f(y):
        w = y / b0
        d = np.asarray(bose(w, thermal.T_env)) - np.asarray(bose(w, thermal.T_body))
        y2 = y * y
        num = y0 * y0 * lam + y2 * (mu - lam)
        den = ((y0 * y0 - y2) ** 2 + y2 * mu * mu) * (y2 + lam * lam)
        return y**7 * num / den * d

    q = panel_integrate(f, breaks)
    return ForceResult.build(pref, q.value, pref * q.error, SMALL_U_FIT, units)


# ---------------------------------------------------------------- plate


def plate_prefactor(geom: Plate, drude: Drude) -> float:
    """S t_B (t_A + t_B) omega_p^2 nu^4 / (24 pi^2)."""
    return geom.area_S * geom.t_B * (geom.t_A + geom.t_B) * drude.omega_p**2 * drude.nu**4 / (24 * np.pi**2)


def force_plate(geom: Plate, drude: Drude, thermal: ThermalPair,
                units: UnitSystem = DEFAULT_UNITS) -> ForceResult:
    """Blackbody layer on the +z side (A), Drude metal on the -z side (B).

    F-hat^BM is the x^5 thermal-moment difference; it is negative for T' > T, so a
    hot plate is pushed toward its metal side like the other geometries.
    """
    _require(drude, Drude, "the B layer")
    pref = plate_prefactor(geom, drude)
    fh = thermal_moment_diff(5, drude.nu, thermal.T_env, thermal.T_body)
    return ForceResult.build(pref, float(fh), 0.0, "closed_form", units)
