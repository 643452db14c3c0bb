"""Adaptive quadrature helpers shared by the measure and kernel code."""

import warnings

import numpy as np
from scipy import integrate

from .errors import QuadratureError

_DECADES = tuple(10.0 ** k for k in range(-12, 13))

# Gauss-Legendre rule on [-1, 1], reused by every fixed-node discretization.
GL_X, GL_W = np.polynomial.legendre.leggauss(8)


def _cuts(lo, hi, points):
    inner = {p for p in _DECADES if lo < p < hi}
    inner |= {float(p) for p in points if np.isfinite(p) and lo < p < hi}
    return [lo] + sorted(inner) + [hi]


def quad(f, lo, hi, points=(), epsabs=1e-9, epsrel=1e-9, limit=200, split=True):
    """Integrate a real scalar function over (lo, hi), splitting at decades.

    Splitting at powers of ten keeps QUADPACK well behaved for Lévy densities
    that blow up at the origin and for slowly decaying tails.  Raises
    QuadratureError when the summed error estimate is far above the target.
    """
    if not hi > lo:
        return 0.0
    if split and lo >= 0.0:
        cuts = _cuts(lo, hi, points)
    else:
        cuts = [lo] + sorted(p for p in points if lo < p < hi) + [hi]
    total = 0.0
    err = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            val, e = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit)
        total += val
        err += e
    if not np.isfinite(total):
        raise QuadratureError(f"non-finite integral on ({lo}, {hi})")
    if err > max(1e3 * epsabs, 1e-6 * abs(total), 1e-7):
        raise QuadratureError(
            f"quadrature did not converge on ({lo}, {hi}): value {total:.6g}, error {err:.3g}"
        )
    return total


def cquad(f, lo, hi, points=(), **kw):
    """Complex-valued version of :func:`quad` (real and imaginary parts separately)."""
    re = quad(lambda x: f(x).real, lo, hi, points, **kw)
    im = quad(lambda x: f(x).imag, lo, hi, points, **kw)
    return complex(re, im)


def log_panels(lo, hi, per_decade=4):
    """Gauss-Legendre nodes and weights on geometric panels covering (lo, hi)."""
    n = max(1, int(np.ceil(per_decade * np.log10(hi / lo))))
    edges = np.geomspace(lo, hi, n + 1)
    return panel_nodes(edges)


def panel_nodes(edges):
    a = edges[:-1, None]
    b = edges[1:, None]
    x = 0.5 * (b - a) * GL_X[None, :] + 0.5 * (a + b)
    w = 0.5 * (b - a) * GL_W[None, :]
    return x.ravel(), w.ravel()
