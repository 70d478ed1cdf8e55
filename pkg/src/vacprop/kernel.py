"""Radiation kernel of the free-space Green's dyadic.

Delta(u) is the trace Im G(-R) Im G(R) scaled by (4 pi R^3)^2 / 2 with u = omega R,
and D(u) = d/du [Delta(u)/u^6].  Both are written as P0(u) + Pc(u) cos 2u + Ps(u) sin 2u;
below U_SWITCH that form cancels catastrophically, so Taylor series with exact
rational coefficients (expanded once at import) are used there instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .errors import DomainError

U_SWITCH = 1.0
SERIES_ORDER = 48


def trig_series(p0=(), pc=(), ps=(), psi=(), order: int = SERIES_ORDER):
    """Taylor coefficients of p0(u) + pc(u) cos 2u + ps(u) sin 2u + psi(u) Si(2u).

    Polynomials are coefficient sequences in ascending powers.  Returns a list of
    Fractions c[k] for u^k, k <= order.
    """
    cos2 = [Fraction(0)] * (order + 1)
    sin2 = [Fraction(0)] * (order + 1)
    si2 = [Fraction(0)] * (order + 1)
    for j in range(order // 2 + 1):
        if 2 * j <= order:
            cos2[2 * j] = Fraction((-4) ** j, factorial(2 * j))
        if 2 * j + 1 <= order:
            sin2[2 * j + 1] = Fraction((-1) ** j * 2 ** (2 * j + 1), factorial(2 * j + 1))
            si2[2 * j + 1] = Fraction((-1) ** j * 2 ** (2 * j + 1), (2 * j + 1) * factorial(2 * j + 1))
    out = [Fraction(0)] * (order + 1)
    for k, c in enumerate(p0):
        if k <= order:
            out[k] += Fraction(c)
    for poly, basis in ((pc, cos2), (ps, sin2), (psi, si2)):
        for k, c in enumerate(poly):
            if c == 0:
                continue
            for m in range(order + 1 - k):
                out[k + m] += Fraction(c) * basis[m]
    return out


def series_eval(coeffs, u, shift: int = 0):
    """sum_k coeffs[k] u^(k - shift) for the nonzero tail k >= shift (Horner)."""
    c = [float(x) for x in coeffs[shift:]]
    u = np.asarray(u, dtype=float)
    acc = np.zeros_like(u)
    for ck in reversed(c):
        acc = acc * u + ck
    return acc


# Delta = (3+u^2+u^4)/2 + (-3+5u^2-u^4)/2 cos 2u + (-3u+u^3) sin 2u
_DELTA_P0 = (Fraction(3, 2), 0, Fraction(1, 2), 0, Fraction(1, 2))
_DELTA_PC = (Fraction(-3, 2), 0, Fraction(5, 2), 0, Fraction(-1, 2))
_DELTA_PS = (0, -3, 0, 1)
DELTA_SERIES = trig_series(_DELTA_P0, _DELTA_PC, _DELTA_PS)

# u^7 D = -9 - 2u^2 - u^4 + (9 - 16u^2 + 3u^4) cos 2u + (18u - 8u^3 + u^5) sin 2u
_D_P0 = (-9, 0, -2, 0, -1)
_D_PC = (9, 0, -16, 0, 3)
_D_PS = (0, 18, 0, -8, 0, 1)
D_SERIES = trig_series(_D_P0, _D_PC, _D_PS)

assert all(c == 0 for c in DELTA_SERIES[:6]) and DELTA_SERIES[6] == Fraction(2, 3)
assert all(c == 0 for c in D_SERIES[:8]) and D_SERIES[8] == Fraction(-4, 9)


def _out(x):
    return x if np.ndim(x) else float(x)


def _check_nonneg(u):
    u = np.asarray(u, dtype=float)
    if np.any(u < 0) or np.any(np.isnan(u)):
        raise DomainError("kernel argument must be non-negative")
    return u


def _delta_exact(u):
    s2, c2 = np.sin(2 * u), np.cos(2 * u)
    u2 = u * u
    return 0.5 * (3 + u2 + u2 * u2) + 0.5 * (-3 + 5 * u2 - u2 * u2) * c2 + u * (u2 - 3) * s2


def delta_trace(u):
    """Delta(u) >= 0, ~ (2/3) u^6 at small u and ~ u^4/2 on average at large u."""
    u = _check_nonneg(u)
    small = u < U_SWITCH
    us = np.where(small, u, 0.0)
    ue = np.where(small, U_SWITCH, u)
    return _out(np.where(small, series_eval(DELTA_SERIES, us), _delta_exact(ue)))


def delta_reduced(u):
    """Delta(u)/u^6 - 2/3, free of cancellation at small u (equals -(2/9) u^2 + ...)."""
    u = _check_nonneg(u)
    small = u < U_SWITCH
    us = np.where(small, u, 0.0)
    ue = np.where(small, U_SWITCH, u)
    tail = DELTA_SERIES[:6] + [Fraction(0)] + DELTA_SERIES[7:]
    ser = series_eval(tail, us, shift=6)
    ex = _delta_exact(ue) / ue**6 - 2.0 / 3.0
    return _out(np.where(small, ser, ex))


def _deriv_exact(u):
    s2, c2 = np.sin(2 * u), np.cos(2 * u)
    u2 = u * u
    num = -9 - u2 * (2 + u2) + (9 - 16 * u2 + 3 * u2 * u2) * c2 + u * (18 - 8 * u2 + u2 * u2) * s2
    return num / u**7


def delta_deriv(u):
    """D(u) = d/du [Delta(u)/u^6]; D(0) = 0, ~ -(4/9) u at small u."""
    u = _check_nonneg(u)
    small = u < U_SWITCH
    us = np.where(small, u, 0.0)
    ue = np.where(small, U_SWITCH, u)
    return _out(np.where(small, series_eval(D_SERIES, us, shift=7), _deriv_exact(ue)))


@dataclass(frozen=True)
class KernelEval:
    u: float
    value: float
    branch: str  # "series" or "exact"


def kernel_eval(u: float, which: str = "delta") -> KernelEval:
    """Scalar evaluation that also reports which branch produced the value."""
    fn = {"delta": delta_trace, "deriv": delta_deriv, "reduced": delta_reduced}[which]
    u = float(u)
    return KernelEval(u, fn(u), "series" if u < U_SWITCH else "exact")


def gamma0_components(R_vec, omega: float) -> np.ndarray:
    """Divergenceless free-space Green's dyadic at separation R_vec, 3x3 complex."""
    R_vec = np.asarray(R_vec, dtype=float)
    R = float(np.linalg.norm(R_vec))
    if R == 0:
        raise DomainError("Green's dyadic is singular at zero separation")
    n = R_vec / R
    wr = omega * R
    rr = np.outer(n, n)
    g = rr * (3 - 3j * wr - wr**2) - np.eye(3) * (1 - 1j * wr - wr**2)
    return g * np.exp(1j * wr) / (4 * np.pi * R**3)


def gamma0_far_field(R_vec, omega: float) -> np.ndarray:
    """Radiation-zone form omega^2 (1 - RR) e^{i omega R} / (4 pi R)."""
    R_vec = np.asarray(R_vec, dtype=float)
    R = float(np.linalg.norm(R_vec))
    n = R_vec / R
    return omega**2 * (np.eye(3) - np.outer(n, n)) * np.exp(1j * omega * R) / (4 * np.pi * R)
