"""Independent oracles for friction, far-field flux and the mirror-plus-dielectric
system, and the registry of cross-path checks run by ``vacprop validate``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DomainError
from .materials import SusceptibilityModel, ThermalPair, bose, eval_chi
from .quadrature import panel_nodes, thermal_breaks
from .dynamics import UPPER_IN_T, PolarizabilitySpectrum

# ---------------------------------------------------------------- momentum-space friction


@dataclass(frozen=True)
class MomentumForceSpec:
    """Fourier-space susceptibility chi(k, omega) of a body moving with velocity v."""

    chi_fourier: Callable
    v: float
    T_env: float

    @classmethod
    def uniform(cls, model: SusceptibilityModel, volume: float, v: float, T_env: float):
        return cls(lambda k, w: volume * eval_chi(model, w), v, T_env)


def doppler_y(omega, k_z, v):
    """y with omega y = gamma (omega + k_z v)."""
    g = 1.0 / np.sqrt(1.0 - v * v)
    return g * (omega + k_z * v) / omega


def momentum_friction_first_order(spec: MomentumForceSpec, n_k: int = 48) -> float:
    """(1/4 pi^2) int d omega int_{-omega}^{omega} dk_z Im alpha k_z (omega^2 - k_z^2) n(beta gamma (omega + k_z v)).

    The on-shell delta function is already integrated out; alpha = chi(0, omega).
    """
    v, T = spec.v, spec.T_env
    if not abs(v) < 1:
        raise DomainError("velocity must satisfy |v| < 1")
    if v == 0:
        return 0.0
    if not T > 0:
        raise DomainError("environment temperature must be positive")
    g = 1.0 / np.sqrt(1.0 - v * v)
    breaks = thermal_breaks(T, T, UPPER_IN_T * T / (g * (1 - abs(v))))
    nodes, wts = panel_nodes(breaks, 16)
    sx, sw = np.polynomial.legendre.leggauss(n_k)
    w = nodes[..., None]
    k = w * sx  # k_z in [-omega, omega]
    zero = np.zeros(3)
    alpha_im = np.imag(spec.chi_fourier(zero, nodes))[..., None]
    occ = bose(g * (w + k * v), T)
    f = alpha_im * k * (w * w - k * k) * occ * w * sw  # dk_z = omega ds
    return float(np.sum(f * wts[..., None])) / (4 * np.pi**2)


# ---------------------------------------------------------------- Im Gamma integrated over k_x


def imgamma_kx_integral(k_y, k_z, omega):
    """int dk_x Im Gamma(k, omega) with Im Gamma = pi sgn(omega) k_perp^2 delta(k^2 - omega^2)."""
    k_y, k_z, omega = (np.asarray(a, dtype=float) for a in (k_y, k_z, omega))
    q2 = omega * omega - k_y * k_y - k_z * k_z
    inside = q2 > 0
    q = np.sqrt(np.where(inside, q2, 1.0))
    out = np.where(inside, np.pi * np.sign(omega) * (omega * omega - k_z * k_z) / q, 0.0)
    return out if out.ndim else float(out)


def imgamma_kx_regularized(k_y: float, k_z: float, omega: float, eps: float) -> float:
    """Same integral with delta(x) replaced by the Lorentzian eps/pi/(x^2 + eps^2).

    Integrated in x = k_x^2 - q^2 so the peak sits at x = 0 with width eps.
    """
    q2 = omega * omega - k_y * k_y - k_z * k_z

    def lor(x):
        return eps / np.pi / (x * x + eps * eps)

    def g(x):
        return (x + q2 + k_y * k_y) * lor(x) / (2 * np.sqrt(x + q2))

    opts = dict(epsabs=0, epsrel=1e-12, limit=400)
    lo = -q2
    if q2 > 0:
        w = min(100 * eps, 0.25 * q2)
        total = integrate.quad(lambda x: 0.5 * (x + q2 + k_y * k_y) * lor(x), lo, lo / 2,
                               weight="alg", wvar=(-0.5, 0.0), **opts)[0]
        for a, b in ((lo / 2, -w), (-w, 0.0), (0.0, w), (w, q2)):
            total += integrate.quad(g, a, b, **opts)[0]
        total += integrate.quad(g, q2, np.inf, **opts)[0]
    else:
        total = integrate.quad(lambda x: 0.5 * (x + q2 + k_y * k_y) * lor(x), lo, lo + 1.0,
                               weight="alg", wvar=(-0.5, 0.0), **opts)[0]
        total += integrate.quad(g, lo + 1.0, np.inf, **opts)[0]
    return float(2 * np.pi * np.sign(omega) * total)


def imgamma_kx_extrapolated(k_y: float, k_z: float, omega: float, eps: float = 1e-4) -> float:
    """Richardson extrapolation eps -> 0 of the regularized integral."""
    return 2 * imgamma_kx_regularized(k_y, k_z, omega, eps / 2) - imgamma_kx_regularized(k_y, k_z, omega, eps)


# ---------------------------------------------------------------- mirror plus dielectric


def screen_profile_integral(z: float) -> float:
    """2 pi int_0^inf rho d rho z rho^2/(rho^2 + z^2)^(5/2), which is 4 pi/3 for every z > 0."""
    if not z > 0:
        raise DomainError("screen distance must be positive")
    val = integrate.quad(lambda r: r * z * r * r / (r * r + z * z) ** 2.5, 0.0, np.inf,
                         epsabs=0, epsrel=1e-12, limit=200)[0]
    return 2 * np.pi * val


def _omega4_moment(spec: PolarizabilitySpectrum, thermal: ThermalPair) -> float:
    """int omega^4 Im alpha [n(omega/T) - n(omega/T')] d omega."""
    if thermal.equilibrium:
        return 0.0
    temps = [t for t in (thermal.T_env, thermal.T_body) if t > 0]
    breaks = thermal_breaks(min(temps), max(temps), UPPER_IN_T * max(temps), extra=spec.scales)
    nodes, wts = panel_nodes(breaks, 16)
    d = np.asarray(bose(nodes, thermal.T_env)) - np.asarray(bose(nodes, thermal.T_body))
    return float(np.sum(nodes**4 * spec(nodes) * d * wts))


@dataclass(frozen=True)
class TwoPathValue:
    closed_form: float
    via_quadrature: float

    @property
    def rel_diff(self) -> float:
        scale = max(abs(self.closed_form), abs(self.via_quadrature))
        return 0.0 if scale == 0 else abs(self.closed_form - self.via_quadrature) / scale


def mirror_dielectric_power(spec: PolarizabilitySpectrum, thermal: ThermalPair, z: float = 1.0) -> TwoPathValue:
    """Energy flux in +z through the screen for a dielectric in front of a mirror.

    Closed form -(2/3 pi^2) int omega^4 Im alpha dn, and the same quantity built from
    the S_z profile integrated over a screen at height ``z``.
    """
    m = _omega4_moment(spec, thermal)
    closed = -2.0 / (3 * np.pi**2) * m
    via = -1.0 / (4 * np.pi**2) * screen_profile_integral(z) * (2.0 / np.pi) * m
    return TwoPathValue(closed, via)


def mirror_dielectric_force(spec: PolarizabilitySpectrum, thermal: ThermalPair) -> float:
    """F_z = (1/8 pi^2) int omega^4 Im alpha [coth(beta omega/2) - coth(beta' omega/2)]."""
    return _omega4_moment(spec, thermal) / (4 * np.pi**2)


# ---------------------------------------------------------------- far-field flux


def _sphere_rule(n_theta: int = 24, n_phi: int = 48):
    ct, wt = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    st = np.sqrt(1 - ct * ct)
    R = np.stack([np.outer(st, np.cos(phi)), np.outer(st, np.sin(phi)),
                  np.outer(ct, np.ones(n_phi))], axis=-1).reshape(-1, 3)
    w = np.outer(wt, np.full(n_phi, 2 * np.pi / n_phi)).ravel()
    return R, w


def angular_projection(tensor) -> float:
    """int d Omega (delta_ij - R_i R_j) T_ij by product quadrature on the sphere."""
    T = np.asarray(tensor, dtype=float)
    R, w = _sphere_rule()
    proj = np.trace(T) - np.einsum("ni,ij,nj->n", R, T, R)
    return float(np.sum(w * proj))


def farfield_flux_total(alpha_tensor_im, spec: PolarizabilitySpectrum, thermal: ThermalPair) -> float:
    """Power absorbed through a far sphere for Im alpha_ij(omega) = tensor_ij * spec(omega).

    For an isotropic unit tensor this equals :func:`radiated_power` of ``spec``.
    """
    T = np.asarray(alpha_tensor_im, dtype=float)
    if T.shape != (3, 3):
        raise DomainError("polarizability tensor must be 3x3")
    if not np.allclose(T, T.T, rtol=0, atol=1e-14 * max(1.0, np.abs(T).max())):
        raise DomainError("polarizability tensor must be symmetric")
    if np.linalg.eigvalsh(T).min() < -1e-14 * max(1.0, np.abs(T).max()):
        raise DomainError("Im alpha tensor must be non-negative")
    return angular_projection(T) * _omega4_moment(spec, thermal) / (8 * np.pi**3)


# ---------------------------------------------------------------- check registry


@dataclass(frozen=True)
class CheckResult:
    name: str
    suite: str
    value: float
    reference: float
    error: float
    tolerance: float
    measure: str
    passed: bool


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    run: Callable[[], tuple]
    tolerance: float
    measure: str = "rel"  # "rel", "abs" or "factor"

    def evaluate(self) -> CheckResult:
        value, reference = (float(x) for x in self.run())
        if self.measure == "abs":
            err = abs(value - reference)
        elif self.measure == "factor":
            err = abs(np.log(abs(value / reference))) if value * reference > 0 else np.inf
            return CheckResult(self.name, self.suite, value, reference, err, self.tolerance, self.measure,
                               bool(err <= np.log(self.tolerance)))
        else:
            err = abs(value - reference) / abs(reference) if reference != 0 else abs(value)
        return CheckResult(self.name, self.suite, value, reference, err, self.tolerance, self.measure,
                           bool(err <= self.tolerance))


def _setup():
    from .units import REFERENCE_UNITS
    from .materials import preset
    U = REFERENCE_UNITS
    gold = preset("gold", U)
    T = U.temperature(300)
    return U, gold, T, ThermalPair(T, 2 * T)


def _gold_spectrum(radius_cm=1e-5):
    U, gold, T, hot = _setup()
    a = U.length(radius_cm)
    return PolarizabilitySpectrum.from_volume(gold.model, 4 * np.pi * a**3 / 3)


def _friction_pair(v):
    from .dynamics import friction_first_order
    U, gold, T, _ = _setup()
    a = U.length(1e-5)
    V = 4 * np.pi * a**3 / 3
    m = momentum_friction_first_order(MomentumForceSpec.uniform(gold.model, V, v, T))
    c = friction_first_order(PolarizabilitySpectrum.from_volume(gold.model, V), ThermalPair(T, T), v, "ZZ")
    return m, c


def _einstein_hopf():
    from .dynamics import einstein_hopf_derivative, friction_first_order
    U, gold, T, _ = _setup()
    spec = _gold_spectrum()
    v = 1e-3
    return friction_first_order(spec, ThermalPair(T, T), v, "ISO") / v, einstein_hopf_derivative(spec, T)


def _dipole_cancellation():
    from .dynamics import friction_first_order_parts
    U, gold, T, _ = _setup()
    field, dipole = friction_first_order_parts(_gold_spectrum(), ThermalPair(T, 2 * T), 0.1, "ISO")
    return dipole / field, 0.0


def _friction_odd():
    from .dynamics import friction_first_order
    U, gold, T, _ = _setup()
    spec = _gold_spectrum()
    return friction_first_order(spec, ThermalPair(T, T), -0.01), -friction_first_order(spec, ThermalPair(T, T), 0.01)


def _r_asymptote():
    from .dynamics import R_ASYMPTOTIC_SLOPE, r_function
    return r_function(1e3), R_ASYMPTOTIC_SLOPE * 1e3


def _second_order_ratio():
    from .dynamics import friction_second_order_needle, needle_friction_derivative
    U, gold, T, _ = _setup()
    C = np.pi * U.length(50e-7) ** 2
    b = U.length(1.0)
    v = 1e-3
    return friction_second_order_needle(C, b, 1.0, T, v) / v / needle_friction_derivative(C, b, gold.model, T), 5e-8


def _moment_check(n):
    def run():
        from .forces import fhat_moment_quadrature
        from .specfun import thermal_moment_diff
        U, gold, T, hot = _setup()
        return thermal_moment_diff(n, gold.model.nu, hot.T_env, hot.T_body), \
            fhat_moment_quadrature(n, gold.model.nu, hot)[0]
    return run


def _kernel_switch(which):
    def run():
        from . import kernel
        u = kernel.U_SWITCH
        fn = {"delta": kernel.delta_trace, "deriv": kernel.delta_deriv}[which]
        exact = {"delta": kernel._delta_exact, "deriv": kernel._deriv_exact}[which]
        return fn(np.nextafter(u, 0.0)), exact(u)
    return run


def _janus_geom():
    from .geometry import JanusBall
    U, gold, T, hot = _setup()
    return JanusBall.from_cm(1e-4, U)


def _closed_vs_generic(kind):
    def run():
        from . import forces
        from .geometry import LARGE_U_FIT, SMALL_U_FIT, Needle, Plate, SphericalShell
        from .materials import BlackbodySurface, Constant
        U, gold, T, hot = _setup()
        if kind == "janus":
            g = _janus_geom()
            closed = forces.force_janus(g, 1.0, gold.model, hot, units=U).force_natural
            gen = forces.force_generic(g, Constant(1.0), gold.model, hot, mode=SMALL_U_FIT, units=U).force_natural
        elif kind == "shell":
            g = SphericalShell(U.length(1.0), 2 / gold.model.omega_p)
            closed = forces.force_shell(g, 1.0, gold.model, hot, units=U).force_natural
            gen = forces.force_generic(g, Constant(1.0), gold.model, hot, mode=LARGE_U_FIT, units=U).force_natural
        elif kind == "plate":
            g = Plate.from_cm(1.0, 1e-6, 1e-6, U)
            closed = forces.force_plate(g, gold.model, hot, units=U).force_natural
            gen = forces.force_generic(g, BlackbodySurface(), gold.model, hot, units=U).force_natural
        else:
            g = Needle.from_cm(1e-2, 1e-2, 1e-3, U)
            closed = forces.force_needle(g, 1.0, gold.model, hot, units=U).force_natural
            gen = forces.force_generic(g, Constant(1.0), gold.model, hot, units=U).force_natural
        return closed, gen
    return run


def _equilibrium_zero():
    from .forces import force_generic
    from .materials import Constant
    U, gold, T, _ = _setup()
    return force_generic(_janus_geom(), Constant(1.0), gold.model, ThermalPair(T, T), units=U).force_natural, 0.0


def _swap_sign():
    from .forces import force_generic
    from .geometry import SMALL_U_FIT
    from .materials import Lorentz
    U, gold, T, hot = _setup()
    lor = Lorentz(0.1, 0.05, 0.01)
    ab = force_generic(_janus_geom(), lor, gold.model, hot, mode=SMALL_U_FIT, units=U).force_natural
    ba = force_generic(_janus_geom(), gold.model, lor, hot, mode=SMALL_U_FIT, units=U).force_natural
    return ba, -ab


def _imgamma(ky, kz, w):
    return lambda: (imgamma_kx_extrapolated(ky, kz, w), imgamma_kx_integral(ky, kz, w))


def _mirror_paths():
    U, gold, T, hot = _setup()
    p = mirror_dielectric_power(_gold_spectrum(), hot, z=0.37)
    return p.via_quadrature, p.closed_form


def _mirror_ratio():
    U, gold, T, hot = _setup()
    spec = _gold_spectrum()
    return mirror_dielectric_force(spec, hot) / mirror_dielectric_power(spec, hot).closed_form, -3 / 8


def _farfield_iso():
    from .dynamics import radiated_power
    U, gold, T, hot = _setup()
    spec = _gold_spectrum()
    return farfield_flux_total(np.eye(3), spec, hot), radiated_power(spec, hot)


def _farfield_zz():
    t = np.zeros((3, 3))
    t[2, 2] = 1.0
    return angular_projection(t), 8 * np.pi / 3


def _stefan():
    from .dynamics import radiated_power
    U, gold, T, hot = _setup()
    S = 3.0
    return radiated_power(PolarizabilitySpectrum.blackbody(S), hot), S * np.pi**2 / 60 * (hot.T_env**4 - hot.T_body**4)


def _cooling_time():
    from .dynamics import cooling_model, cooling_time
    U, gold, T, _ = _setup()
    model = cooling_model("debye", gold, U)
    ref = integrate.quad(lambda u: 1 / (u**6 - 1), 1.1, 2.0, epsabs=0, epsrel=1e-13)[0]
    return cooling_time(model, T, 2 * T, 1.1 * T), model.t_c(T) * ref


CHECKS: tuple[Check, ...] = (
    *(Check(f"friction-momentum-vs-coordinate-v{v}", "friction", (lambda v=v: _friction_pair(v)), 1e-6)
      for v in (0.01, 0.1, 0.5)),
    Check("friction-einstein-hopf-limit", "friction", _einstein_hopf, 1e-2),
    Check("friction-dipole-term-cancels", "friction", _dipole_cancellation, 1e-10, "abs"),
    Check("friction-odd-in-velocity", "friction", _friction_odd, 1e-12),
    Check("friction-r-asymptote", "friction", _r_asymptote, 1e-2),
    Check("friction-second-to-first-order-ratio", "friction", _second_order_ratio, 3.0, "factor"),
    *(Check(f"imgamma-kx-regularized-{i}", "friction", _imgamma(*args), 1e-6)
      for i, args in enumerate([(0.0, 0.0, 1.0), (0.3, 0.4, 1.0), (0.1, 0.2, -2.0)])),
    Check("imgamma-kx-outside-light-cone", "friction", _imgamma(0.8, 0.7, 1.0), 1e-6, "abs"),
    Check("mirror-power-screen-vs-closed", "mirror", _mirror_paths, 1e-8),
    Check("mirror-force-to-power-ratio", "mirror", _mirror_ratio, 1e-8),
    Check("mirror-screen-profile", "mirror", lambda: (screen_profile_integral(2.5), 4 * np.pi / 3), 1e-10),
    Check("farfield-isotropic-vs-radiated-power", "farfield", _farfield_iso, 1e-8),
    Check("farfield-zz-angular-factor", "farfield", _farfield_zz, 1e-12),
    Check("radiation-stefan-law", "radiation", _stefan, 1e-8),
    *(Check(f"specfun-thermal-moment-{n}", "specfun", _moment_check(n), 1e-8) for n in (3, 5, 7)),
    Check("kernel-delta-branch-continuity", "kernel", _kernel_switch("delta"), 1e-10),
    Check("kernel-deriv-branch-continuity", "kernel", _kernel_switch("deriv"), 1e-10),
    *(Check(f"forces-{k}-closed-vs-quadrature", "forces", _closed_vs_generic(k), 1e-6)
      for k in ("janus", "shell", "plate", "needle")),
    Check("forces-equilibrium-zero", "forces", _equilibrium_zero, 0.0, "abs"),
    Check("forces-material-swap-flips-sign", "forces", _swap_sign, 1e-10),
    Check("cooling-time-vs-quad", "cooling", _cooling_time, 1e-8),
)


def select_checks(filter_text: str | None = None) -> list[Check]:
    """Checks whose name or suite contains ``filter_text``; raises on no match."""
    if not filter_text:
        return list(CHECKS)
    chosen = [c for c in CHECKS if filter_text in c.name or filter_text == c.suite]
    if not chosen:
        raise DomainError(f"no validation check matches {filter_text!r}")
    return chosen


def run_checks(filter_text: str | None = None) -> list[CheckResult]:
    return [c.evaluate() for c in select_checks(filter_text)]
