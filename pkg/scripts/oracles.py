"""Regenerate the reference values frozen into the test suite.

Every value here is computed without importing vacprop: one-dimensional integrals
with mpmath at high precision, and the shell and Janus geometry integrals by
brute-force tensor-product Gauss cubature in their original three and four
variables.  The multi-dimensional ones take a minute or so; skip them with --fast.

    python scripts/oracles.py [--fast]
"""
import argparse
import sys

import mpmath as mp
import numpy as np
from numpy.polynomial.legendre import leggauss

mp.mp.dps = 30


def delta(u):
    u = mp.mpf(u)
    return (3 + u**2 + u**4) / 2 + (-3 + 5 * u**2 - u**4) / 2 * mp.cos(2 * u) + u * (u**2 - 3) * mp.sin(2 * u)


def d_of_u(u):
    u = mp.mpf(u)
    return (-9 - u**2 * (2 + u**2) + (9 - 16 * u**2 + 3 * u**4) * mp.cos(2 * u)
            + u * (18 - 8 * u**2 + u**4) * mp.sin(2 * u)) / u**7


def thermal_moment(n, y):
    y = mp.mpf(y)
    return mp.quad(lambda x: x**n / (x**2 + 1) / mp.expm1(x * y), [0, 1, 10 / y, mp.inf])


def needle(a, b):
    """16 pi^2 I_AB/(C^2 omega^5) at unit frequency: int D(s) min(s, a, b, a+b-s) ds.

    D(s) ~ -4s/9 near zero, where the closed form cancels catastrophically, so
    [0, 1e-6] is done from the leading term.
    """
    with mp.workdps(100):
        a, b = mp.mpf(a), mp.mpf(b)
        e = mp.mpf("1e-6")
        return -mp.mpf(4) / 27 * e**3 + mp.quad(lambda s: d_of_u(s) * min(s, a, b, a + b - s),
                                                  sorted({e, a, b, a + b}))


def r_of_t(t):
    t = mp.mpf(t)

    def weight(s):
        lo, hi = max(-1, s - 1), min(1, s + 1)
        return mp.quad(lambda x: x**2 * (1 - x**2) * (1 - (x - s) ** 2), [lo, hi])

    def f(s):
        return t**2 * weight(s) if s == 0 else mp.sin(s * t) ** 2 / s**2 * weight(s)

    return mp.quad(f, mp.linspace(-2, 2, int(8 * t) + 9))


def _gl(n, edges):
    x, w = leggauss(n)
    lo, hi = np.asarray(edges[:-1])[:, None], np.asarray(edges[1:])[:, None]
    return ((hi - lo) / 2 * x + (hi + lo) / 2).ravel(), ((hi - lo) / 2 * w).ravel()


def _d_numpy(u):
    u2 = u * u
    uu = np.where(u < 0.3, 1.0, u)
    s2, c2 = np.sin(2 * uu), np.cos(2 * uu)
    exact = (-9 - uu**2 * (2 + uu**2) + (9 - 16 * uu**2 + 3 * uu**4) * c2 + uu * (18 - 8 * uu**2 + uu**4) * s2) / uu**7
    series = u * (-4 / 9 + u2 * (28 / 225 + u2 * (-22 / 1575 + u2 * 256 / 297675)))
    return np.where(u < 0.3, series, exact)


def shell(x, n=20, m=32):
    """Three-fold integral over cos(theta) in (0,1), cos(theta') in (-1,0) and the
    relative azimuth, graded toward the equator where the two hemispheres touch."""
    c, wc = _gl(n, np.concatenate([[0.0], np.geomspace(1e-6, 1.0, m)]))
    cp, wcp = -c[::-1], wc[::-1]
    ph, wph = _gl(n, np.linspace(0.0, np.pi, m + 1))
    CP, PH = cp[:, None], ph[None, :]
    W = wcp[:, None] * wph[None, :]
    total = 0.0
    for ci, wi in zip(c, wc):  # one outer slice at a time keeps memory flat
        cosg = ci * CP + np.sqrt(1 - ci**2) * np.sqrt(1 - CP**2) * np.cos(PH)
        u = x * np.sqrt(np.maximum(2 * (1 - cosg), 0.0))
        total += wi * float(np.sum(W * (ci - CP) * _d_numpy(u) / np.where(u > 0, u, 1.0)))
    return 2 * total  # relative azimuth folded from (0, 2 pi) onto (0, pi)


def _delta_reduced_coeffs(k=6):
    """Taylor coefficients of Delta(u)/u^6 - 2/3 in powers of u^2."""
    tay = mp.taylor(delta, 0, 6 + 2 * k)
    return [float(tay[6 + 2 * j]) for j in range(1, k + 1)]


def janus(x, n=40):
    """Hemisphere-surface term minus bisecting-disk term, each a four-fold Gauss product."""
    coeffs = _delta_reduced_coeffs()

    def red(u):
        u2 = u * u
        series = sum(c * u2 ** (j + 1) for j, c in enumerate(coeffs))
        uu = np.where(u < 0.5, 1.0, u)
        s2, c2 = np.sin(2 * uu), np.cos(2 * uu)
        exact = (0.5 * (3 + uu**2 + uu**4) + 0.5 * (-3 + 5 * uu**2 - uu**4) * c2 + uu * (uu**2 - 3) * s2) / uu**6 - 2 / 3
        return np.where(u < 0.5, series, exact)

    def gl(a, b, m=n):
        return _gl(m, [a, b])

    th, wth = gl(0, np.pi / 2)
    rp, wrp = gl(0, 1)
    tp, wtp = gl(np.pi / 2, np.pi)
    ph, wph = gl(0, 2 * np.pi, 2 * n)
    RP, TP, PH = np.meshgrid(rp, tp, ph, indexing="ij")
    base = np.einsum("j,k,l->jkl", wrp * rp**2, wtp * np.sin(tp), wph)
    hemi = 0.0
    for t, w in zip(th, wth):
        p = np.sqrt(np.maximum(1 + RP**2 - 2 * RP * (np.cos(t) * np.cos(TP) + np.sin(t) * np.sin(TP) * np.cos(PH)), 0))
        hemi += np.sum(base * red(x * p)) * w * np.sin(t) * np.cos(t)
    r, wr = gl(0, 1)
    disk = 0.0
    for s, w in zip(r, wr):
        p = np.sqrt(np.maximum(s**2 + RP**2 - 2 * s * RP * np.sin(TP) * np.cos(PH), 0))
        disk += np.sum(base * red(x * p)) * w * s
    return (hemi - disk) * x**6


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--fast", action="store_true", help="skip the shell and Janus cubatures")
    args = ap.parse_args()
    show = lambda v: mp.nstr(v, 20)  # noqa: E731
    sys.stdout.reconfigure(line_buffering=True)
    print("Delta:", {u: show(delta(u)) for u in ("0.1", "0.7", "3", "40")})
    print("D:", {u: show(d_of_u(u)) for u in ("0.1", "0.7", "3", "40")})
    print("J_n(y):", {(n, y): show(thermal_moment(n, y)) for n in (3, 5, 7) for y in ("0.5", "1.4", "15")})
    print("needle:", {(a, b): show(needle(a, b)) for a, b in (("1", "2"), ("0.1", "0.3"), ("5", "3"))})
    print("r(t):", {t: show(r_of_t(t)) for t in ("0.5", "5", "20")})
    print("Debye cooling int_1.1^2 du/(u^6-1):", show(mp.quad(lambda u: 1 / (u**6 - 1), [mp.mpf("1.1"), 2])))
    if not args.fast:
        print("shell:", {x: repr(shell(x)) for x in (0.3, 1.0, 5.0)})
        print("janus:", {x: repr(janus(x)) for x in (0.5, 2.0)})


if __name__ == "__main__":
    main()
