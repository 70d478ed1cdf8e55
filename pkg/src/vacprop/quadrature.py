"""Deterministic composite Gauss-Legendre rules.

Every integral in the package goes through :func:`panel_integrate`, which evaluates a
vectorised integrand on a fixed panel mesh with two rule orders and reports their
difference as the error estimate.  Results are bit-reproducible for a given mesh.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Oscillations cos(2 omega L) are resolved explicitly up to omega*L = X_RESOLVE.
X_RESOLVE = 4000.0


@dataclass(frozen=True)
class Quad:
    value: float
    error: float


@lru_cache(maxsize=None)
def _gl(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(breaks, n: int):
    """Nodes and weights of an n-point rule on each interval of ``breaks``."""
    b = np.asarray(breaks, dtype=float)
    x, w = _gl(n)
    half = 0.5 * np.diff(b)
    mid = 0.5 * (b[1:] + b[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes, weights


def panel_integrate(fn, breaks, n: int = 16, n_check: int = 10) -> Quad:
    """Integrate ``fn`` (vectorised over a 2-D node array) across ``breaks``."""
    nodes, weights = panel_nodes(breaks, n)
    hi = float(np.sum(np.sum(fn(nodes) * weights, axis=1)))
    nodes, weights = panel_nodes(breaks, n_check)
    lo = float(np.sum(np.sum(fn(nodes) * weights, axis=1)))
    return Quad(hi, abs(hi - lo))


def clean_breaks(points, lower: float, upper: float) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    p = p[(p >= lower) & (p <= upper)]
    p = np.unique(np.concatenate([p, [lower, upper]]))
    return p


def thermal_breaks(T_min: float, T_max: float, upper: float, extra=(), lengths=(),
                   per_decade: int = 6, n_tail: int = 40) -> np.ndarray:
    """Mesh on [0, upper] for integrands with thermal scales T_min..T_max.

    Geometric panels from 1e-6 T_min up to T_max, uniform panels to ``upper``,
    user breakpoints ``extra``, and half-period panels for every oscillation
    length in ``lengths`` up to omega*L = X_RESOLVE.
    """
    lo = 1e-6 * T_min
    n_geo = max(2, int(np.ceil(np.log10(T_max / lo) * per_decade)) + 1)
    pts = [np.array([0.0]), np.geomspace(lo, T_max, n_geo), np.linspace(T_max, upper, n_tail + 1)]
    pts.append(np.asarray(extra, dtype=float))
    for L in lengths:
        if L <= 0:
            continue
        top = min(upper, X_RESOLVE / L)
        m = int(np.ceil(top / (0.5 * np.pi / L)))
        pts.append(np.linspace(0.0, top, m + 1))
    return clean_breaks(np.concatenate(pts), 0.0, upper)


def oscillation_breaks(lower: float, upper: float, period: float, min_panels: int = 4) -> np.ndarray:
    """Uniform mesh with panels no wider than half an oscillation period."""
    m = max(min_panels, int(np.ceil((upper - lower) / (0.5 * period))))
    return np.linspace(lower, upper, m + 1)
