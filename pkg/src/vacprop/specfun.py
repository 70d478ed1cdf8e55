"""Sine integral, digamma, and the thermal moments
J_n(y) = int_0^inf x^n/(x^2+1) / (exp(x y) - 1) dx for n = 3, 5, 7.

The moments use the digamma closed form for y < Y_SWITCH.  Above it the closed form
is a difference of O(1) terms with a result of order y^-(n+1), so it loses too many
digits; there a Gauss-Laguerre rule in t = x y is used instead (the integrand is
analytic well beyond the rule's support once y is large).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import DomainError

SUPPORTED_POWERS = (3, 5, 7)
Y_SWITCH = 10.0


def sine_integral(x):
    """Si(x) = int_0^x sin t / t dt (odd in x)."""
    si, _ = special.sici(np.asarray(x, dtype=float))
    return si if np.ndim(si) else float(si)


def digamma(x):
    """psi(x) for x > 0."""
    a = np.asarray(x, dtype=float)
    if np.any(~(a > 0)):
        raise DomainError("digamma is implemented for positive arguments only")
    out = special.digamma(a)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class ThermalMomentSpec:
    power_n: int
    scale_y: float

    def __post_init__(self):
        if self.power_n not in SUPPORTED_POWERS:
            raise DomainError(f"thermal moment power must be one of {SUPPORTED_POWERS}")
        if not self.scale_y > 0:
            raise DomainError("thermal moment scale must be positive")


def _closed(n: int, y):
    # J3 = pi^2/(6y^2) - (1/2)[ln(y/2pi) - pi/y - psi(y/2pi)]
    # J5 = pi^4/(15y^4) - J3,   J7 = 8 pi^6/(63 y^6) - J5
    z = y / (2.0 * np.pi)
    j = np.pi**2 / (6.0 * y**2) - 0.5 * (np.log(z) - np.pi / y - special.digamma(z))
    if n >= 5:
        j = np.pi**4 / (15.0 * y**4) - j
    if n >= 7:
        j = 8.0 * np.pi**6 / (63.0 * y**6) - j
    return j


@lru_cache(maxsize=None)
def _laguerre(m: int = 80):
    return np.polynomial.laguerre.laggauss(m)


def _laguerre_moment(n: int, y):
    t, w = _laguerre()
    yy = np.asarray(y, dtype=float)[..., None]
    # x^n/(x^2+1)/(e^{xy}-1) dx with x = t/y, weight e^{-t} absorbed by the rule
    f = t**n / (-np.expm1(-t)) / (1.0 + (t / yy) ** 2)
    return np.sum(w * f, axis=-1) / yy[..., 0] ** (n + 1)


def thermal_moment(n: int, y):
    """J_n(y); vectorised, J_n(inf) = 0."""
    if n not in SUPPORTED_POWERS:
        raise DomainError(f"thermal moment power must be one of {SUPPORTED_POWERS}")
    ya = np.asarray(y, dtype=float)
    if np.any(~(ya > 0)):
        raise DomainError("thermal moment scale must be positive")
    out = np.zeros_like(ya)
    fin = np.isfinite(ya)
    small = fin & (ya < Y_SWITCH)
    large = fin & ~small
    if np.any(small):
        out[small] = _closed(n, ya[small])
    if np.any(large):
        out[large] = _laguerre_moment(n, ya[large])
    return out if out.ndim else float(out)


def thermal_moment_closed(spec: ThermalMomentSpec) -> float:
    return thermal_moment(spec.power_n, spec.scale_y)


def thermal_moment_diff(n: int, nu: float, T_env: float, T_body: float):
    """int_0^inf x^n/(x^2+1) [n(x nu/T_env) - n(x nu/T_body)] dx.

    Exactly zero at T_env == T_body; a zero temperature contributes nothing.
    """
    Te = np.asarray(T_env, dtype=float)
    Tb = np.asarray(T_body, dtype=float)
    with np.errstate(divide="ignore"):
        ye = np.where(Te > 0, nu / np.where(Te > 0, Te, 1.0), np.inf)
        yb = np.where(Tb > 0, nu / np.where(Tb > 0, Tb, 1.0), np.inf)
    out = np.asarray(thermal_moment(n, ye)) - np.asarray(thermal_moment(n, yb))
    out = np.where(Te == Tb, 0.0, out)
    return out if out.ndim else float(out)
