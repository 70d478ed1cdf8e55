"""Friction, terminal velocities, radiated power and cooling trajectories.

Velocities are fractions of c, times are eV^-1 and masses eV unless a helper says
otherwise.  Friction forces oppose the motion: they are negative for v > 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from .errors import DomainError, NonConvergenceError, UnsupportedVariantError
from .forces import ForceResult
from .materials import Drude, Lorentz, Substance, SusceptibilityModel, ThermalPair, bose, eval_chi
from .quadrature import oscillation_breaks, panel_integrate, panel_nodes, thermal_breaks
from .specfun import thermal_moment
from .units import DEFAULT_UNITS, UnitSystem

UPPER_IN_T = 60.0
# fraction of v_T at which the velocity counts as having reached its asymptote
EQUILIBRATION_FRACTION = 0.9


# ---------------------------------------------------------------- polarizability


@dataclass(frozen=True)
class PolarizabilitySpectrum:
    """Im alpha(omega) of a small body, in eV^-3."""

    alpha_im: Callable[[np.ndarray], np.ndarray]
    provenance: str
    scales: tuple = ()

    def __call__(self, omega):
        return self.alpha_im(np.asarray(omega, dtype=float))

    @classmethod
    def from_volume(cls, model: SusceptibilityModel, volume: float):
        """alpha = volume * chi (first order in chi)."""
        return cls(lambda w: volume * np.imag(eval_chi(model, w)), "volume-integrated-chi",
                   _scales(model))

    @classmethod
    def lorenz_lorentz(cls, model: SusceptibilityModel, volume: float):
        """alpha = 3 V (eps - 1)/(eps + 2) with eps = 1 + chi."""
        def im(w):
            chi = eval_chi(model, w)
            return np.imag(3 * volume * chi / (chi + 3))
        return cls(im, "lorenz-lorentz", _scales(model))

    @classmethod
    def blackbody(cls, area: float):
        """Surface layer with Im alpha = area/(4 omega)."""
        return cls(lambda w: area / (4 * w), "blackbody-surface")

    def scaled(self, factor: float) -> "PolarizabilitySpectrum":
        f = self.alpha_im
        return PolarizabilitySpectrum(lambda w: factor * f(w), self.provenance, self.scales)


def _scales(model):
    if isinstance(model, Drude):
        return (model.nu,)
    if isinstance(model, Lorentz):
        return (model.omega0, model.gamma)
    return ()


def _check_velocity(v):
    if not abs(v) < 1:
        raise DomainError("velocity must satisfy |v| < 1")


def _inv_sinh2(x):
    """1/sinh^2(x) for x > 0 without overflow."""
    e = np.exp(-2.0 * np.minimum(x, 350.0))
    return 4.0 * e / (1.0 - e) ** 2


# ---------------------------------------------------------------- first-order friction

_Y_NODES = 48


def friction_first_order_parts(spec: PolarizabilitySpectrum, thermal: ThermalPair, v: float,
                               polarization: str = "ISO"):
    """(field part, dipole part) of the first-order friction on a moving particle.

    The dipole part carries the body temperature and integrates to zero by the
    symmetry of the y integrand about y = gamma; it is evaluated rather than dropped.
    """
    _check_velocity(v)
    if v == 0:
        return 0.0, 0.0
    if polarization not in ("ISO", "ZZ"):
        raise DomainError("polarization must be 'ISO' or 'ZZ'")
    T, Tp = thermal.T_env, thermal.T_body
    if T <= 0:
        raise DomainError("first-order friction needs a positive environment temperature")
    g = 1.0 / np.sqrt(1.0 - v * v)
    y_lo, y_hi = g * (1 - v), g * (1 + v)
    # signed Gauss rule on [y_lo, y_hi]; reversed limits for v < 0 give negative weights
    yx, yw = np.polynomial.legendre.leggauss(_Y_NODES)
    y = 0.5 * (y_hi + y_lo) + 0.5 * (y_hi - y_lo) * yx
    wy = 0.5 * (y_hi - y_lo) * yw
    s = (y - g) / (g * v)
    fP = 3 / (2 * g * v) * np.ones_like(y) if polarization == "ISO" else 3 / (4 * g * v) * (1 - s * s)
    ymoment = (y - g) * fP * wy

    y_min = min(y_lo, y_hi)
    upper = UPPER_IN_T * max(T, Tp) / y_min
    breaks = thermal_breaks(min(T, Tp) if Tp > 0 else T, max(T, Tp), upper, extra=spec.scales)
    nodes, wts = panel_nodes(breaks, 16)
    w = nodes[..., None]
    occ_field = bose(w * y, T)
    occ_dip = np.broadcast_to(np.asarray(bose(nodes, Tp))[..., None], occ_field.shape)
    base = (nodes**4 * spec(nodes) * wts)[..., None]
    pref = 1.0 / (3 * np.pi**2 * g * v)
    field_part = pref * float(np.sum(base * occ_field * ymoment))
    dipole_part = -pref * float(np.sum(base * occ_dip * ymoment))
    return field_part, dipole_part


def friction_first_order(spec: PolarizabilitySpectrum, thermal: ThermalPair, v: float,
                         polarization: str = "ISO") -> float:
    field_part, dipole_part = friction_first_order_parts(spec, thermal, v, polarization)
    return field_part + dipole_part


def einstein_hopf_derivative(spec: PolarizabilitySpectrum, T_env: float) -> float:
    """dF_f/dv at v = 0: -(beta/12 pi^2) int omega^5 Im alpha / sinh^2(beta omega/2)."""
    if not T_env > 0:
        raise DomainError("environment temperature must be positive")
    beta = 1.0 / T_env
    breaks = thermal_breaks(T_env, T_env, UPPER_IN_T * T_env, extra=spec.scales)
    q = panel_integrate(lambda w: w**5 * spec(w) * _inv_sinh2(0.5 * beta * w), breaks)
    return -beta / (12 * np.pi**2) * q.value


def needle_friction_x_integral(c: float) -> float:
    """int_0^inf x^4/(x^2 + c^2) / sinh^2 x dx."""
    if c < 0:
        raise DomainError("c must be non-negative")
    breaks = np.unique(np.concatenate([[0.0], np.geomspace(1e-6, 1.0, 25), np.linspace(1.0, 400.0, 200),
                                       [c] if c > 0 else []]))
    return panel_integrate(lambda x: x**4 / (x * x + c * c) * _inv_sinh2(x), breaks).value


def needle_friction_derivative(cross_section_C: float, metal_length: float, drude: Drude, T_env: float) -> float:
    """F'_f of a thin needle whose metal half has volume C * length."""
    beta = 1.0 / T_env
    J = needle_friction_x_integral(0.5 * beta * drude.nu)
    return -2 * cross_section_C * metal_length * drude.omega_p**2 * drude.nu / (3 * np.pi**2 * beta**2) * J


def terminal_velocity_friction(propulsive, fprime: float) -> float:
    """v_T = -F/F'_f, at which propulsion and friction balance."""
    if not fprime < 0:
        raise DomainError("friction derivative must be negative")
    F = propulsive.force_natural if isinstance(propulsive, ForceResult) else float(propulsive)
    return -F / fprime


def friction_time_constant(mass: float, fprime: float) -> float:
    if not mass > 0:
        raise DomainError("mass must be positive")
    if not fprime < 0:
        raise DomainError("friction derivative must be negative")
    return mass / abs(fprime)


def friction_velocity(t, v_T: float, t0: float):
    """v(t) = v_T (1 - exp(-t/t0)) starting from rest."""
    return v_T * -np.expm1(-np.asarray(t, dtype=float) / t0)


# ---------------------------------------------------------------- second-order friction

_GL4 = np.polynomial.legendre.leggauss(4)


def _r_weight(s):
    """W(s) = int x^2 (1-x^2)(1-(x-s)^2) dx over the overlap of [-1,1] and [s-1,s+1]."""
    s = np.asarray(s, dtype=float)
    lo = np.maximum(-1.0, s - 1.0)
    hi = np.minimum(1.0, s + 1.0)
    x, w = _GL4  # exact for the degree-6 polynomial integrand
    xx = 0.5 * (hi + lo)[..., None] + 0.5 * (hi - lo)[..., None] * x
    ww = 0.5 * (hi - lo)[..., None] * w
    f = xx**2 * (1 - xx**2) * (1 - (xx - s[..., None]) ** 2)
    return np.sum(f * ww, axis=-1)


R_ASYMPTOTIC_SLOPE = 16 * np.pi / 105


def r_function(t: float) -> float:
    """r(t) = int_{-1}^1 int_{-1}^1 x^2(1-x^2)(1-y^2) sin^2((x-y)t)/(x-y)^2 dx dy.

    Integrated in s = x - y with the inner integral done exactly; r(t) ~ 16 pi t/105.
    """
    t = float(t)
    if t < 0:
        raise DomainError("r(t) needs t >= 0")
    if t == 0:
        return 0.0
    breaks = oscillation_breaks(-2.0, 2.0, np.pi / t, min_panels=8)
    breaks = np.unique(np.concatenate([breaks, [0.0]]))

    def f(s):
        sinc = t * np.sinc(s * t / np.pi)  # sin(s t)/s
        return sinc * sinc * _r_weight(s)

    return panel_integrate(f, breaks).value


R_EXACT_LIMIT = 50.0


def friction_second_order_needle(cross_section_C: float, length_b: float, chi0: float, T_env: float,
                                 v: float, r_mode: str = "auto") -> float:
    """Second-order friction on a long needle with real uniform susceptibility chi0.

    Linear in v; r(t) uses its large-t form when b T exceeds ``R_EXACT_LIMIT``.
    """
    _check_velocity(v)
    if v == 0:
        return 0.0
    bT = length_b * T_env
    use_asym = r_mode == "asymptotic" or (r_mode == "auto" and bT > R_EXACT_LIMIT)
    breaks = np.unique(np.concatenate([[0.0], np.geomspace(1e-4, 1.0, 12), np.linspace(1.0, 60.0, 60)]))
    if use_asym:
        def f(z):
            return z**6 * R_ASYMPTOTIC_SLOPE * z * bT * _inv_sinh2(z)
        integral = panel_integrate(f, breaks).value
    else:
        nodes, wts = panel_nodes(breaks, 16)
        rv = np.vectorize(r_function)(nodes * bT)
        integral = float(np.sum(nodes**6 * rv * _inv_sinh2(nodes) * wts))
    return -4 / np.pi**3 * cross_section_C**2 * v * T_env**6 * chi0**2 * integral


def friction_second_order_point_parts(alpha: Callable, T_env: float, v: float, n_k: int = 24):
    """(total, k_z'-odd part) of the second-order friction on a point particle with
    real polarizability alpha(omega)."""
    _check_velocity(v)
    if not T_env > 0:
        raise DomainError("environment temperature must be positive")
    g = 1.0 / np.sqrt(1.0 - v * v)
    beta = 1.0 / T_env
    sx, sw = np.polynomial.legendre.leggauss(n_k)
    upper = UPPER_IN_T * T_env / (1 - abs(v))
    breaks = thermal_breaks(T_env, T_env, upper)
    nodes, wts = panel_nodes(breaks, 16)
    w = nodes[..., None, None]
    s = sx[None, None, :, None]
    sp = sx[None, None, None, :]
    occ = bose(g * w * (1 + s * v), T_env)
    base = w**7 * np.asarray(alpha(w)) ** 2 * (1 - s * s) * (1 - sp * sp) * occ
    W = wts[..., None, None] * sw[None, None, :, None] * sw[None, None, None, :]
    even = float(np.sum(base * s * W)) / (32 * np.pi**3)
    odd = float(np.sum(base * sp * W)) / (32 * np.pi**3)
    return even + odd, odd


def friction_second_order_point(alpha: Callable, T_env: float, v: float) -> float:
    total, odd = friction_second_order_point_parts(alpha, T_env, v)
    if abs(odd) > 1e-10 * max(abs(total), 1e-300) and abs(odd) > 1e-300:
        raise NonConvergenceError("odd k_z' part did not cancel", where=v)
    return total


# ---------------------------------------------------------------- radiated power


def radiated_power(spec: PolarizabilitySpectrum, thermal: ThermalPair) -> float:
    """Absorbed power (1/pi^2) int omega^4 Im alpha [n(omega/T) - n(omega/T')] d omega.

    Positive when the body absorbs (T > T'), negative when it radiates.
    """
    if thermal.equilibrium:
        return 0.0
    temps = [t for t in (thermal.T_env, thermal.T_body) if t > 0]
    breaks = thermal_breaks(min(temps), max(temps), UPPER_IN_T * max(temps), extra=spec.scales)

    def f(w):
        d = np.asarray(bose(w, thermal.T_env)) - np.asarray(bose(w, thermal.T_body))
        return w**4 * spec(w) * d

    return panel_integrate(f, breaks).value / np.pi**2


# ---------------------------------------------------------------- cooling


@dataclass(frozen=True)
class DebyeLorenzLorentz:
    """High-temperature Debye heat capacity with Lorenz-Lorentz radiative loss."""

    n_density: float
    omega_p: float
    nu: float

    def t_c(self, T_env: float) -> float:
        return 21 * self.n_density * self.omega_p**2 / (8 * np.pi**4 * self.nu * T_env**5)

    def rate_factor(self, u, T_env: float):
        """dt/du in units of t_c at body temperature u T_env."""
        u = np.asarray(u, dtype=float)
        return 1.0 / (1.0 - u**6)


@dataclass(frozen=True)
class WeakSusceptibility:
    """Debye heat capacity with first-order Drude radiative loss."""

    n_density: float
    omega_p: float
    nu: float

    def t_c(self, T_env: float = 0.0) -> float:
        return 6 * np.pi**2 * self.n_density / (self.nu**2 * self.omega_p**2)

    def rate_factor(self, u, T_env: float):
        u = np.asarray(u, dtype=float)
        x = self.nu / T_env
        L = 2.0 * (thermal_moment(3, x) - thermal_moment(3, x / u))
        return 1.0 / (x * L)


CoolingModel = DebyeLorenzLorentz | WeakSusceptibility


def cooling_model(kind: str, substance: Substance, units: UnitSystem = DEFAULT_UNITS):
    if not isinstance(substance.model, Drude):
        raise UnsupportedVariantError("cooling models need a Drude metal")
    n = substance.number_density(units)
    cls = {"debye": DebyeLorenzLorentz, "weak": WeakSusceptibility}[kind]
    return cls(n, substance.model.omega_p, substance.model.nu)


def _u_breaks(u_from: float, u_to: float, n_geo: int = 60, n_lin: int = 20):
    """Panels on [u_to, u_from] (u_from > u_to >= 1) graded toward u = 1."""
    d_lo, d_hi = u_to - 1.0, u_from - 1.0
    if d_lo > 0:
        geo = 1.0 + np.geomspace(d_lo, d_hi, n_geo)
    else:
        geo = 1.0 + np.geomspace(1e-12, d_hi, n_geo)
    return np.unique(np.concatenate([geo, np.linspace(u_to, u_from, n_lin + 1), [u_to, u_from]]))


def cooling_time(model, T_env: float, T_from: float, T_to: float) -> float:
    """Time to cool from T_from to T_to in a fixed environment."""
    if not T_env > 0:
        raise DomainError("environment temperature must be positive")
    if T_to == T_env:
        raise DomainError("the environment temperature is only reached asymptotically (infinite time)")
    if not T_from > T_to > T_env:
        raise DomainError("need T_from > T_to > T_env")
    u0, u1 = T_from / T_env, T_to / T_env
    q = panel_integrate(lambda u: -model.rate_factor(u, T_env), _u_breaks(u0, u1))
    return model.t_c(T_env) * q.value


@dataclass(frozen=True)
class CoolingTrajectory:
    times: np.ndarray
    T_body: np.ndarray
    force: np.ndarray
    velocity: np.ndarray
    terminal_velocity: float
    mass: float
    t_c: float
    equilibration_time: float
    epsilon: float
    pairing: str = ""
    meta: dict = field(default_factory=dict)

    def records(self):
        return list(zip(self.times.tolist(), self.T_body.tolist(), self.force.tolist(),
                        self.velocity.tolist()))


def _velocity_integral(model, force_fn, T_env, u0, u_end):
    """int_{u_end}^{u0} (-f(u)) F(u T) du, i.e. the accumulated momentum in t_c units."""
    br = _u_breaks(u0, u_end)

    def f(u):
        return -model.rate_factor(u, T_env) * np.asarray(force_fn(u * T_env), dtype=float)

    return panel_integrate(f, br).value


def terminal_velocity_cooling(force_fn: Callable, model, mass: float, T_env: float, T_start: float,
                              n_samples: int = 200, tol: float = 1e-3, pairing: str = "",
                              equilibration_fraction: float = EQUILIBRATION_FRACTION) -> CoolingTrajectory:
    """Terminal velocity (t_c/m) int_{u0}^{1} f(u) F(u) du of a cooling body.

    ``force_fn`` maps an array of body temperatures to forces (eV^2).  The upper
    end u = 1 is approached as 1 + eps, halving eps until v_T moves by less than
    ``tol`` relative.  The time-domain trajectory is sampled on the same grid, and
    the equilibration time is when v first reaches ``equilibration_fraction`` of v_T.
    """
    if not mass > 0:
        raise DomainError("mass must be positive")
    if not T_start > T_env > 0:
        raise DomainError("need T_start > T_env > 0")
    u0 = T_start / T_env
    tc = model.t_c(T_env)
    eps = 1e-3 * (u0 - 1.0)
    prev = _velocity_integral(model, force_fn, T_env, u0, 1.0 + eps)
    for _ in range(60):
        eps *= 0.5
        cur = _velocity_integral(model, force_fn, T_env, u0, 1.0 + eps)
        if abs(cur - prev) <= tol * abs(cur) or cur == prev:
            break
        prev = cur
    else:
        raise NonConvergenceError("terminal velocity did not settle as u -> 1", where=eps)
    v_T = tc / mass * cur

    # trajectory: cumulative integrals at panel boundaries, u descending from u0
    br = _u_breaks(u0, 1.0 + eps, n_geo=n_samples)[::-1]
    nodes, wts = panel_nodes(br, 16)
    fvals = -model.rate_factor(nodes, T_env)
    Fvals = np.asarray(force_fn(nodes * T_env), dtype=float)
    # wts are negative on descending panels; flip so increments are positive time
    dt = -np.sum(fvals * wts, axis=1) * tc
    dv = -np.sum(fvals * Fvals * wts, axis=1) * tc / mass
    times = np.concatenate([[0.0], np.cumsum(dt)])
    vel = np.concatenate([[0.0], np.cumsum(dv)])
    temps = br * T_env
    forces = np.asarray(force_fn(temps), dtype=float)

    target = equilibration_fraction * v_T

    def gap(u):
        return tc / mass * _velocity_integral(model, force_fn, T_env, u0, u) - target

    t_eq = float("nan")
    if v_T != 0:
        idx = np.nonzero(np.abs(vel) >= abs(target))[0]
        if len(idx):
            k = idx[0]
            # widen by one sample each side: the refinement mesh differs from the trajectory mesh
            u_hi, u_lo = br[max(k - 2, 0)], br[min(k + 1, len(br) - 1)]
            g_hi, g_lo = gap(u_hi), gap(u_lo)
            if np.sign(g_hi) != np.sign(g_lo):
                u_star = optimize.brentq(gap, u_lo, u_hi, xtol=1e-14, rtol=1e-12)
            else:
                u_star = u_lo if abs(g_lo) < abs(g_hi) else u_hi
            t_eq = tc * panel_integrate(lambda u: -model.rate_factor(u, T_env), _u_breaks(u0, u_star)).value
    return CoolingTrajectory(times, temps, forces, vel, v_T, mass, tc, t_eq, eps, pairing)


def no_cooling_velocity(force: float, duration: float, mass: float) -> float:
    """Velocity after ``duration`` under a constant force from rest."""
    return force * duration / mass


# ---------------------------------------------------------------- masses


def half_ball_mass(substance: Substance, radius: float, units: UnitSystem = DEFAULT_UNITS) -> float:
    return substance.mass_density(units) * 2 * np.pi * radius**3 / 3


def half_shell_mass(substance: Substance, radius: float, thickness: float,
                    units: UnitSystem = DEFAULT_UNITS) -> float:
    return substance.mass_density(units) * 2 * np.pi * radius**2 * thickness


def rod_mass(substance: Substance, cross_section: float, length: float,
             units: UnitSystem = DEFAULT_UNITS) -> float:
    return substance.mass_density(units) * cross_section * length
