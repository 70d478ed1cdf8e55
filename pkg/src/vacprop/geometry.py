"""Geometric integrals I_AB for the needle, thin shell, Janus ball and thin plate.

All lengths are in eV^-1.  I_AB is the double integral over the two halves of the
z derivative of Delta(omega R)/(4 pi R^3)^2, with the derivative taken with respect
to the point in half A (the +z half).

The shell and Janus multiple integrals are reduced to one-dimensional integrals
over the pair distance before quadrature:

* shell: the two-sphere integral of (cos t - cos t') D(u)/u depends only on the
  chord length, giving  pi/(2 x^4) int_0^{2x} u^2 D(u) du  with x = omega a;
* Janus: both four-fold integrals (hemisphere surface and bisecting disk against
  the lower half-ball) collapse to  x^6 int_0^2 w(P) Delta(xP)/(xP)^6 dP  with
  piecewise polynomial pair-distance weights w_h, w_d (see :func:`janus_weights`).

Both reductions are checked against direct tensor-product cubature in the tests.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CubatureRefused, DomainError
from .kernel import delta_deriv, delta_reduced, series_eval, trig_series
from .quadrature import oscillation_breaks, panel_integrate
from .specfun import sine_integral
from .units import DEFAULT_UNITS, UnitSystem

SHELL_FIT_SLOPE = -26.88
JANUS_LARGE_U_COEFF = -0.927
JANUS_SMALL_U_COEFF = -2.0 * np.pi / 27.0
OMEGA_A_MAX = 50.0

CLOSED_FORM = "closed_form"
CUBATURE = "cubature"
LARGE_U_FIT = "large_u_fit"
SMALL_U_FIT = "small_u_fit"


@dataclass(frozen=True)
class Needle:
    """A half of length a (material A, z > 0) joined to a half of length b (B, z < 0)."""

    a: float
    b: float
    cross_section_C: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.cross_section_C > 0):
            raise DomainError("needle dimensions must be positive")

    @classmethod
    def from_cm(cls, a_cm, b_cm, radius_cm, units: UnitSystem = DEFAULT_UNITS):
        r = units.length(radius_cm)
        return cls(units.length(a_cm), units.length(b_cm), np.pi * r * r)

    @property
    def oscillation_lengths(self):
        return (self.a, self.b, self.a + self.b)


@dataclass(frozen=True)
class SphericalShell:
    radius_a: float
    thickness_t: float

    def __post_init__(self):
        if not (self.radius_a > 0 and self.thickness_t > 0):
            raise DomainError("shell dimensions must be positive")
        if self.thickness_t > self.radius_a / 10:
            warnings.warn("shell thickness exceeds a/10; the thin-shell integral assumes t << a")

    @classmethod
    def from_cm(cls, a_cm, t_cm, units: UnitSystem = DEFAULT_UNITS):
        return cls(units.length(a_cm), units.length(t_cm))

    @property
    def oscillation_lengths(self):
        return (2 * self.radius_a,)


@dataclass(frozen=True)
class JanusBall:
    radius_a: float

    def __post_init__(self):
        if not self.radius_a > 0:
            raise DomainError("ball radius must be positive")

    @classmethod
    def from_cm(cls, a_cm, units: UnitSystem = DEFAULT_UNITS):
        return cls(units.length(a_cm))

    @property
    def oscillation_lengths(self):
        return (2 * self.radius_a,)


@dataclass(frozen=True)
class Plate:
    """Layer A of thickness t_A on top of layer B of thickness t_B, area S."""

    area_S: float
    t_A: float
    t_B: float

    def __post_init__(self):
        if not self.area_S > 0 or self.t_A < 0 or self.t_B < 0:
            raise DomainError("plate area must be positive and thicknesses non-negative")

    @classmethod
    def from_cm(cls, area_cm2, t_A_cm, t_B_cm, units: UnitSystem = DEFAULT_UNITS):
        return cls(units.area(area_cm2), units.length(t_A_cm), units.length(t_B_cm))

    @property
    def oscillation_lengths(self):
        return ()


BodyGeometry = Needle | SphericalShell | JanusBall | Plate


@dataclass(frozen=True)
class IabResult:
    value: float
    mode: str
    error_estimate: float
    omega_a: float


# ---------------------------------------------------------------- needle

# g(x) = -9 - 5x^2(1+3x^2) + (9-13x^2+11x^4) cos 2x + 2x(9-x^2) sin 2x + 22 x^5 Si(2x)
G_SERIES = trig_series((-9, 0, -5, 0, -15), (9, 0, -13, 0, 11), (0, 18, 0, -2), (0, 0, 0, 0, 0, 22))
assert all(c == 0 for c in G_SERIES[:6]) and G_SERIES[6] == 20
_G_SWITCH = 1.0


def _g_exact(x):
    x2 = x * x
    return (-9 - 5 * x2 * (1 + 3 * x2) + (9 - 13 * x2 + 11 * x2 * x2) * np.cos(2 * x)
            + 2 * x * (9 - x2) * np.sin(2 * x) + 22 * x**5 * sine_integral(2 * x))


def _split(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("needle functions take non-negative arguments")
    small = x < _G_SWITCH
    return x, small, np.where(small, x, 0.0), np.where(small, _G_SWITCH, x)


def _out(v):
    return v if np.ndim(v) else float(v)


def needle_g(x):
    """g(x) ~ 20 x^6 at small x and 11 pi x^5 at large x."""
    x, small, xs, xe = _split(x)
    return _out(np.where(small, series_eval(G_SERIES, xs), _g_exact(xe)))


def needle_f(x):
    """f(x) = g(x)/(30 x^5); f(0) = 0 and f -> 11 pi/30."""
    x, small, xs, xe = _split(x)
    ser = series_eval(G_SERIES, xs, shift=5) / 30.0
    return _out(np.where(small, ser, _g_exact(xe) / (30.0 * xe**5)))


def needle_f_reduced(x):
    """f(x) - 2x/3, the part of f that survives in the needle bracket."""
    x, small, xs, xe = _split(x)
    tail = [0] * 7 + G_SERIES[7:]
    ser = series_eval(tail, xs, shift=5) / 30.0
    return _out(np.where(small, ser, _g_exact(xe) / (30.0 * xe**5) - 2.0 * xe / 3.0))


def needle_bracket(xa, xb):
    """f(xa + xb) - f(xa) - f(xb).

    The linear term 2x/3 cancels identically, so it is removed before subtracting
    whenever an argument is small.
    """
    xa = np.asarray(xa, dtype=float)
    xb = np.asarray(xb, dtype=float)
    use_reduced = np.minimum(xa, xb) < _G_SWITCH
    red = needle_f_reduced(xa + xb) - (needle_f_reduced(xa) + needle_f_reduced(xb))
    full = needle_f(xa + xb) - (needle_f(xa) + needle_f(xb))
    return _out(np.where(use_reduced, red, full))


def needle_h(u: float, beta_hat: float, lam: float, size_ratio: float, n_panels: int = 400) -> float:
    """h(u, beta_hat) = u^-5 int_0^inf dy/y g(K y u) / ((y^2 + lam^2)(e^{beta_hat y} - 1)).

    K is ``size_ratio`` (a0/beta0).  Evaluated as written; for the force itself use
    the cancellation-free bracket.
    """
    if not (u > 0 and beta_hat > 0 and lam > 0):
        raise DomainError("h needs positive arguments")
    upper = 60.0 / beta_hat
    period = np.pi / (size_ratio * u)
    breaks = np.unique(np.concatenate([
        [0.0], np.geomspace(1e-6 / beta_hat, upper, 60),
        oscillation_breaks(0.0, min(upper, 4000 * period), period),
    ]))

    def integrand(y):
        with np.errstate(over="ignore"):
            occ = 1.0 / np.expm1(beta_hat * y)
        return needle_g(size_ratio * y * u) / (y * (y * y + lam * lam)) * occ

    return panel_integrate(integrand, breaks).value / u**5


def _iab_needle_values(geom: Needle, omega):
    w = np.asarray(omega, dtype=float)
    pref = geom.cross_section_C**2 * w**5 / (16 * np.pi**2)
    return pref * needle_bracket(w * geom.a, w * geom.b)


def i_ab_needle(geom: Needle, omega: float) -> IabResult:
    if not omega > 0:
        raise DomainError("frequency must be positive")
    v = float(_iab_needle_values(geom, omega))
    return IabResult(v, CLOSED_FORM, 0.0, omega * geom.a)


# ---------------------------------------------------------------- shell


def shell_integral(omega_a: float) -> tuple[float, float]:
    """(value, error) of the reduced shell integral script-I(omega a) by quadrature."""
    x = float(omega_a)
    if not x > 0:
        raise DomainError("omega a must be positive")
    breaks = oscillation_breaks(0.0, 2 * x, np.pi)
    q = panel_integrate(lambda u: u * u * delta_deriv(u), breaks)
    scale = np.pi / (2 * x**4)
    floor = 1e-15 * abs(q.value)
    return scale * q.value, scale * max(q.error, floor, 1e-300)


def _shell_script_i(x, mode: str):
    x = np.asarray(x, dtype=float)
    if mode == LARGE_U_FIT:
        return SHELL_FIT_SLOPE / x**4, np.zeros_like(x)
    if mode != CUBATURE:
        raise DomainError(f"shell integral mode must be {CUBATURE!r} or {LARGE_U_FIT!r}")
    if np.any(x > OMEGA_A_MAX):
        bad = float(np.max(x))
        raise CubatureRefused(f"shell cubature refused at omega*a = {bad:.4g} > {OMEGA_A_MAX}; "
                              f"use mode {LARGE_U_FIT!r}", where=bad)
    flat = x.ravel()
    uniq, inv = np.unique(flat, return_inverse=True)
    vals = np.empty_like(uniq)
    errs = np.empty_like(uniq)
    for k, xv in enumerate(uniq):
        vals[k], errs[k] = shell_integral(xv)
    return vals[inv].reshape(x.shape), errs[inv].reshape(x.shape)


def _iab_shell_values(geom: SphericalShell, omega, mode: str):
    w = np.asarray(omega, dtype=float)
    a, t = geom.radius_a, geom.thickness_t
    s, e = _shell_script_i(w * a, mode)
    pref = w**8 * a**5 * t * t / (8 * np.pi)
    return pref * s, pref * e


def i_ab_shell(geom: SphericalShell, omega: float, mode: str = CUBATURE) -> IabResult:
    if not omega > 0:
        raise DomainError("frequency must be positive")
    v, e = _iab_shell_values(geom, omega, mode)
    return IabResult(float(v), mode, float(e), omega * geom.radius_a)


# ---------------------------------------------------------------- Janus ball


def janus_weights(P):
    """Pair-distance weights (w_h, w_d) of the hemisphere and disk four-fold integrals.

    For any kernel k, the hemisphere term equals int_0^2 w_h(P) k(P) dP and the disk
    term int_0^2 w_d(P) k(P) dP.  Both weights integrate to pi/3.
    """
    P = np.asarray(P, dtype=float)
    pi = np.pi
    inner = P <= 1
    wh = np.where(inner, pi * P**4 / 6, -pi * P**4 / 6 + pi * P**2 - 2 * pi * P / 3)
    wd = np.where(inner, -pi * P**4 / 6 - pi * P**3 / 2 + pi * P**2,
                  pi * P**4 / 6 - pi * P**3 / 2 + 2 * pi * P / 3)
    return wh, wd


def _janus_breaks(x: float):
    per = 0.5 * np.pi / max(x, 1e-300)
    lo = oscillation_breaks(0.0, 1.0, per, min_panels=2)
    hi = oscillation_breaks(1.0, 2.0, per, min_panels=2)
    return np.concatenate([lo, hi[1:]])


def janus_terms(omega_a: float, kernel: str = "exact"):
    """Hemisphere and disk terms separately, each as (value, error).

    ``kernel="u6"`` replaces Delta(u) by its leading (2/3) u^6 term, for which the two
    terms must cancel.
    """
    x = float(omega_a)
    if not x > 0:
        raise DomainError("omega a must be positive")
    if kernel == "u6":
        k = lambda P: np.full_like(P, 2.0 / 3.0)  # noqa: E731
    elif kernel == "exact":
        k = lambda P: delta_reduced(x * P) + 2.0 / 3.0  # noqa: E731
    else:
        raise DomainError("kernel must be 'exact' or 'u6'")
    br = _janus_breaks(x)
    qh = panel_integrate(lambda P: janus_weights(P)[0] * k(P), br)
    qd = panel_integrate(lambda P: janus_weights(P)[1] * k(P), br)
    s = x**6
    return (s * qh.value, s * qh.error), (s * qd.value, s * qd.error)


def janus_integral(omega_a: float) -> tuple[float, float]:
    """(value, error) of script-I_AB(omega a), hemisphere minus disk."""
    x = float(omega_a)
    if not x > 0:
        raise DomainError("omega a must be positive")

    # the (2/3) u^6 part integrates to zero against w_h - w_d, so only the
    # remainder Delta/u^6 - 2/3 is integrated; this keeps small x accurate
    def integrand(P):
        wh, wd = janus_weights(P)
        return (wh - wd) * delta_reduced(x * P)

    q = panel_integrate(integrand, _janus_breaks(x))
    s = x**6
    return s * q.value, s * max(q.error, 1e-15 * abs(q.value), 1e-300)


def _janus_script_i(x, mode: str):
    x = np.asarray(x, dtype=float)
    if mode == SMALL_U_FIT:
        return JANUS_SMALL_U_COEFF * x**8, np.zeros_like(x)
    if mode == LARGE_U_FIT:
        return JANUS_LARGE_U_COEFF * x**4, np.zeros_like(x)
    if mode != CUBATURE:
        raise DomainError(f"unknown Janus integral mode {mode!r}")
    if np.any(x > OMEGA_A_MAX):
        bad = float(np.max(x))
        raise CubatureRefused(f"Janus cubature refused at omega*a = {bad:.4g} > {OMEGA_A_MAX}; "
                              f"use a fit mode", where=bad)
    flat = x.ravel()
    uniq, inv = np.unique(flat, return_inverse=True)
    vals = np.empty_like(uniq)
    errs = np.empty_like(uniq)
    for k, xv in enumerate(uniq):
        vals[k], errs[k] = janus_integral(xv)
    return vals[inv].reshape(x.shape), errs[inv].reshape(x.shape)


def _iab_janus_values(geom: JanusBall, omega, mode: str):
    w = np.asarray(omega, dtype=float)
    a = geom.radius_a
    s, e = _janus_script_i(w * a, mode)
    return s / (8 * np.pi * a), e / (8 * np.pi * a)


def i_ab_janus(geom: JanusBall, omega: float, mode: str = CUBATURE) -> IabResult:
    if not omega > 0:
        raise DomainError("frequency must be positive")
    v, e = _iab_janus_values(geom, omega, mode)
    return IabResult(float(v), mode, float(e), omega * geom.radius_a)


# ---------------------------------------------------------------- plate

PLATE_THICKNESS_LIMIT = 0.3


def _iab_plate_values(geom: Plate, omega):
    w = np.asarray(omega, dtype=float)
    tA, tB = geom.t_A, geom.t_B
    return -geom.area_S / (24 * np.pi) * tA * tB * (tA + tB) * w**6


def i_ab_plate(geom: Plate, omega: float) -> IabResult:
    """Leading small-thickness form; warns once omega * max(t) >= 0.3."""
    if not omega > 0:
        raise DomainError("frequency must be positive")
    if omega * max(geom.t_A, geom.t_B) >= PLATE_THICKNESS_LIMIT:
        warnings.warn("plate thickness is not small compared with the wavelength")
    return IabResult(float(_iab_plate_values(geom, omega)), CLOSED_FORM, 0.0,
                     omega * max(geom.t_A, geom.t_B))


# ---------------------------------------------------------------- dispatch


def iab_values(geom, omega, mode: str | None = None):
    """Vectorised (I_AB, error) over an array of frequencies."""
    if isinstance(geom, Needle):
        v = _iab_needle_values(geom, omega)
        return v, np.zeros_like(v)
    if isinstance(geom, SphericalShell):
        return _iab_shell_values(geom, omega, mode or CUBATURE)
    if isinstance(geom, JanusBall):
        return _iab_janus_values(geom, omega, mode or CUBATURE)
    if isinstance(geom, Plate):
        v = _iab_plate_values(geom, omega)
        return v, np.zeros_like(v)
    raise DomainError(f"unsupported geometry {geom!r}")


# ---------------------------------------------------------------- Monte Carlo


@dataclass(frozen=True)
class PointCloud:
    """Uniform samples of a region with total measure ``volume`` (eV^-3, or less for
    lower-dimensional bodies whose transverse size is folded into the measure)."""

    points: np.ndarray
    volume: float

    @property
    def n(self) -> int:
        return len(self.points)


def _rngs(seed, k=2):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(k)]


def needle_clouds(geom: Needle, n: int, seed: int):
    ra, rb = _rngs(seed)
    za = ra.uniform(0.0, geom.a, n)
    zb = -rb.uniform(0.0, geom.b, n)
    zeros = np.zeros(n)
    A = PointCloud(np.column_stack([zeros, zeros, za]), geom.cross_section_C * geom.a)
    B = PointCloud(np.column_stack([zeros, zeros, zb]), geom.cross_section_C * geom.b)
    return A, B


def _half_ball(rng, n, a, sign):
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    r = a * rng.uniform(size=n) ** (1.0 / 3.0)
    p = v * r[:, None]
    p[:, 2] = sign * np.abs(p[:, 2])
    return p


def janus_clouds(geom: JanusBall, n: int, seed: int):
    ra, rb = _rngs(seed)
    a = geom.radius_a
    vol = 2 * np.pi * a**3 / 3
    return PointCloud(_half_ball(ra, n, a, +1), vol), PointCloud(_half_ball(rb, n, a, -1), vol)


def _half_sphere(rng, n, a, sign):
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    v[:, 2] = sign * np.abs(v[:, 2])
    return a * v


def shell_clouds(geom: SphericalShell, n: int, seed: int):
    ra, rb = _rngs(seed)
    a, t = geom.radius_a, geom.thickness_t
    vol = 2 * np.pi * a * a * t
    return PointCloud(_half_sphere(ra, n, a, +1), vol), PointCloud(_half_sphere(rb, n, a, -1), vol)


def _pair_kernel(pa, pb, omega):
    d = pa - pb
    R = np.linalg.norm(d, axis=-1)
    return omega**7 * delta_deriv(omega * R) * d[..., 2] / (16 * np.pi**2 * R)


def i_ab_generic(cloud_a: PointCloud, cloud_b: PointCloud, omega: float) -> IabResult:
    """Monte Carlo estimate of I_AB; ``error_estimate`` is one standard error.

    Distinct clouds are paired sample-by-sample.  Passing the same cloud twice
    averages over all ordered pairs i != j, for which the antisymmetric kernel sums
    to zero.
    """
    if not omega > 0:
        raise DomainError("frequency must be positive")
    scale = cloud_a.volume * cloud_b.volume
    if cloud_a is cloud_b:
        p = cloud_a.points
        n = len(p)
        with np.errstate(invalid="ignore", divide="ignore"):  # i == j is zeroed below
            k = _pair_kernel(p[:, None, :], p[None, :, :], omega) if n > 1 else np.zeros((1, 1))
        k[np.diag_indices(n)] = 0.0
        m = n * (n - 1)
        mean = float(np.sum(k)) / m
        var = float(np.sum((k - mean) ** 2) - n * mean**2) / max(m - 1, 1)
        return IabResult(scale * mean, "monte_carlo", scale * np.sqrt(max(var, 0.0) / m), float("nan"))
    if cloud_a.n != cloud_b.n:
        raise DomainError("distinct clouds must have equal sample counts")
    a_set = {tuple(r) for r in cloud_a.points}
    if any(tuple(r) in a_set for r in cloud_b.points):
        raise DomainError("sample clouds overlap")
    k = _pair_kernel(cloud_a.points, cloud_b.points, omega)
    mean = float(np.mean(k))
    se = float(np.std(k, ddof=1) / np.sqrt(len(k)))
    return IabResult(scale * mean, "monte_carlo", scale * se, float("nan"))
