"""Integrand kernels ``h`` for stochastic integral representations.

Every catalog kernel except ``wiener_gamma`` is monotone, so all integrals of
the form ``int F(h(t)) dt`` are computed in value space,

    int_0^T F(h(t)) dt = int F(y) ell(y) dy,

where ``ell = -d/dc Leb{t : h(t) > c}`` is the density of the image of
Lebesgue measure under ``h``.  For the kernels defined as inverse functions
(``g*``, ``f*``, ``m*``) this density is explicit, so no inversion is needed
inside quadratures; the inversion engine is only used to evaluate ``h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import _quad
from .errors import (
    BracketError,
    DivergenceError,
    KernelConditionError,
    MonotonicityError,
    UnknownNameError,
)

EULER = 0.5772156649015329
SQRT2PI = math.sqrt(2.0 * math.pi)
SQRT_LOG2 = math.sqrt(math.log(2.0))
GAMMA_3_2 = 0.5 * math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------


def e1(t):
    """Exponential integral ``int_t^inf e^{-s} s^{-1} ds``."""
    return special.exp1(t)


def gauss_tail(t):
    """``int_t^inf phi(u) du``."""
    return special.ndtr(-np.asarray(t, dtype=float))


def phi(t):
    t = np.asarray(t, dtype=float)
    return np.exp(-0.5 * t * t) / SQRT2PI


def m_tail(t):
    """``int_t^inf phi(u) u^{-1} du = E1(t^2/2) / (2 sqrt(2 pi))``."""
    t = np.asarray(t, dtype=float)
    return special.exp1(0.5 * t * t) / (2.0 * SQRT2PI)


def _upper_gamma_3_2(x):
    """Unregularized ``Gamma(3/2, x)``."""
    return GAMMA_3_2 * special.gammaincc(1.5, x)


# ---------------------------------------------------------------------------
# Inversion engine
# ---------------------------------------------------------------------------


def invert_monotone(forward, y, bracket, derivative=None, tol=1e-12, maxiter=300):
    """Solve ``forward(x) = y`` on ``bracket`` for a strictly monotone ``forward``.

    Vectorized over ``y``.  Newton steps (in ``log x`` when the bracket is
    positive) are accepted only when they stay inside the current bracket and
    at least halve the previous step; otherwise the bracket is bisected.
    Stops when ``|forward(x) - y| <= tol (1 + |y|)`` or the bracket collapses
    to a few ulps.
    """
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y).copy()
    lo, hi = float(bracket[0]), float(bracket[1])
    if not hi > lo:
        raise BracketError(f"empty bracket [{lo}, {hi}]")
    logspace = lo > 0.0
    probe = np.geomspace(lo, hi, 33) if logspace else np.linspace(lo, hi, 33)
    fp = np.asarray(forward(probe), dtype=float)
    steps = np.diff(fp)
    if np.all(steps >= 0) and fp[-1] > fp[0]:
        increasing = True
    elif np.all(steps <= 0) and fp[-1] < fp[0]:
        increasing = False
    else:
        raise MonotonicityError("forward map is not monotone on the bracket")
    fmin, fmax = min(fp[0], fp[-1]), max(fp[0], fp[-1])
    slack = tol * (1.0 + np.abs(y))
    if np.any(y < fmin - slack) or np.any(y > fmax + slack) or np.any(~np.isfinite(y)):
        raise BracketError(f"target outside forward range [{fmin:.6g}, {fmax:.6g}] on the bracket")

    to_u = np.log if logspace else (lambda v: v)
    from_u = np.exp if logspace else (lambda v: v)
    a = np.full(y.shape, to_u(lo))
    b = np.full(y.shape, to_u(hi))
    u = 0.5 * (a + b)
    dx_old = b - a
    done = np.zeros(y.shape, dtype=bool)
    for _ in range(maxiter):
        x = from_u(u)
        f = np.asarray(forward(x), dtype=float) - y
        done |= np.abs(f) <= slack
        done |= (b - a) <= 4.0 * np.spacing(np.maximum(np.abs(a), np.abs(b)))
        if done.all():
            break
        too_big = (f > 0) == increasing
        b = np.where(too_big & ~done, u, b)
        a = np.where(~too_big & ~done, u, a)
        if derivative is not None:
            df = np.asarray(derivative(x), dtype=float)
            if logspace:
                df = df * x
            with np.errstate(divide="ignore", invalid="ignore"):
                step = f / df
        else:
            step = np.full(y.shape, np.inf)
        un = u - step
        bad = ~np.isfinite(un) | (un <= a) | (un >= b) | (np.abs(step) > 0.5 * np.abs(dx_old))
        mid = 0.5 * (a + b)
        un = np.where(bad, mid, un)
        dx_old = np.where(done, dx_old, np.abs(un - u))
        u = np.where(done, u, un)
    out = from_u(u)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassInfo:
    example: int
    label: str
    kernel: str
    formula: str
    condition: str


CLASSES = (
    ClassInfo(1, "generalized gamma convolutions", "wiener_gamma", "h(t) user-supplied, int log(1+h) < inf", "mu Gamma"),
    ClassInfo(2, "thorin", "thorin_gstar", "h = g*, g(t)=int_t^inf e^{-s}/s ds", "requires I_log"),
    ClassInfo(3, "bondesson", "bondesson_log", "h(t)=log(1/t) on (0,1)", "any ID law"),
    ClassInfo(4, "thorin (alternative)", "bondesson_log", "h(t)=log(1/t) on (0,1)", "mu selfdecomposable"),
    ClassInfo(5, "selfdecomposable", "ou_exp", "h(t)=e^{-t}", "requires I_log"),
    ClassInfo(6, "type G", "typeg_fstar", "h = f*, f(t)=int_t^inf phi(u) du, on (0,1/2)", "any ID law"),
    ClassInfo(7, "M", "m_star", "h = m*, m(t)=int_t^inf phi(u)/u du", "requires I_log"),
    ClassInfo(8, "jurek", "jurek_t", "h(t)=t on [0,1]", "any ID law"),
    ClassInfo(9, "A", "arcsine_cos", "h(t)=cos(pi t/2) on [0,1]", "any ID law"),
    ClassInfo(10, "type G (alternative)", "sqrtlog_half", "h(t)=sqrt(log(1/t)) on (0,1/2)", "mu in A class"),
    ClassInfo(11, "generalized type G", "sqrtlog_one", "h(t)=sqrt(log(1/t)) on (0,1)", "mu in A class"),
)


class Kernel:
    """Common interface; see :class:`MonotoneKernel` and :class:`WienerGammaKernel`."""

    name = "kernel"
    requires_ilog = False
    monotone = None
    support = math.inf
    horizon = math.inf

    def __call__(self, t):
        raise NotImplementedError

    def moment(self, p):
        """``int_0^T h(t)^p dt``."""
        if p == 1:
            return self.int_h
        if p == 2:
            return self.int_h2
        return self.integrate_values(lambda y: np.asarray(y) ** p)

    @property
    def info(self):
        for c in CLASSES:
            if c.kernel == self.name:
                return c
        return None


class MonotoneKernel(Kernel):
    """A monotone kernel described by its value-space data.

    Parameters are functions of the untruncated kernel: ``h``, the level
    function ``level(c) = Leb{h > c}``, the value density ``ell``, and
    ``upper(c) = int h 1_{h > c} dt``.  A finite ``horizon`` below the
    support end truncates the kernel to ``[0, horizon)``; only decreasing
    kernels can be truncated.
    """

    def __init__(self, name, h, level, ell, upper, int_h, int_h2, support, value_range,
                 monotone="decreasing", requires_ilog=False, breakpoints=(), vcap=None,
                 min_horizon=0.0, horizon=None):
        self.name = name
        self._h = h
        self._level = level
        self._ell = ell
        self._upper = upper
        self._int_h = int_h
        self._int_h2 = int_h2
        self.support = float(support)
        self.monotone = monotone
        self.requires_ilog = requires_ilog
        self.breakpoints = tuple(breakpoints)
        self.min_horizon = min_horizon
        self.horizon = self.support if horizon is None else min(float(horizon), self.support)
        self.truncated_flag = self.horizon < self.support
        if self.truncated_flag and monotone != "decreasing":
            raise ValueError("only decreasing kernels can be truncated")
        vlo, vhi = value_range
        self.h_at_horizon = float(h(np.array([self.horizon]))[0]) if self.truncated_flag else 0.0
        self.value_range = (max(vlo, self.h_at_horizon), vhi)
        self.vcap = vhi if vcap is None else vcap

    # -- evaluation -------------------------------------------------------
    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= 0.0) & (t < self.horizon) if np.isfinite(self.horizon) else (t >= 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(inside, self._h(np.where(inside, t, 0.5 * min(self.horizon, 1.0))), 0.0)
        return out if out.ndim else float(out)

    def level(self, c):
        """``Leb{t in [0, T) : h(t) > c}``."""
        c = np.asarray(c, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            base = np.where(c > 0, self._level(np.maximum(c, 1e-300)), self.horizon)
        out = np.minimum(base, self.horizon)
        return out if out.ndim else float(out)

    def value_density(self, y):
        y = np.asarray(y, dtype=float)
        lo, hi = self.value_range
        inside = (y > lo) & (y < hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(inside, self._ell(np.where(inside, y, 0.5 * (lo + min(hi, 2 * lo + 1)))), 0.0)
        return out if out.ndim else float(out)

    def upper_mass(self, c):
        """``int_0^T h(t) 1_{h(t) > c} dt``."""
        c = np.maximum(np.asarray(c, dtype=float), self.h_at_horizon)
        out = np.where(c > 0, self._upper(np.maximum(c, 1e-300)), self._int_h)
        out = np.where(c >= self.value_range[1], 0.0, out)
        return out if out.ndim else float(out)

    @property
    def int_h(self):
        return float(self.upper_mass(0.0))

    @property
    def int_h2(self):
        if not self.truncated_flag:
            return self._int_h2
        return self.integrate_values(lambda y: np.asarray(y) ** 2)

    # -- value-space integration -----------------------------------------
    def integrate_values(self, F, ylo=0.0, yhi=math.inf, complex_=False, points=(), **tol):
        """``int_{t : ylo < h(t) <= yhi} F(h(t)) dt``; ``points`` are extra breakpoints of ``F``."""
        lo = max(ylo, self.value_range[0])
        hi = min(yhi, self.value_range[1], self.vcap)
        if not hi > lo:
            return 0j if complex_ else 0.0

        def g(y):
            e = self._ell(y)
            return F(y) * e if e != 0.0 else 0.0

        q = _quad.cquad if complex_ else _quad.quad
        return q(g, lo, hi, self.breakpoints + tuple(points), **tol)

    def value_nodes(self, per_decade=8, floor=1e-12):
        """Nodes ``y_k`` and weights ``w_k`` with ``sum w_k F(y_k) ~ int F(h(t)) dt``."""
        lo, hi = self.value_range
        lo = max(lo, floor)
        hi = min(hi, self.vcap)
        edges = set(np.geomspace(lo, hi, max(2, int(per_decade * np.log10(hi / lo)) + 1)))
        if np.isfinite(self.value_range[1]) and self.value_range[1] == hi:
            # resolve an integrable singularity of ell at a finite top value
            gaps = np.geomspace(1e-12 * hi, 0.5 * (hi - lo), 6 * per_decade)
            edges |= set(hi - gaps)
        edges |= {b for b in self.breakpoints if lo < b < hi}
        edges = np.array(sorted(e for e in edges if lo <= e <= hi))
        y, w = _quad.panel_nodes(edges)
        return y, w * self._ell(y)

    # -- truncation -------------------------------------------------------
    def truncated(self, horizon):
        if horizon >= self.support:
            return self
        return MonotoneKernel(
            self.name, self._h, self._level, self._ell, self._upper, self._int_h, self._int_h2,
            self.support, (self.value_range[0], self.value_range[1]), self.monotone,
            self.requires_ilog, self.breakpoints, self.vcap, self.min_horizon, horizon,
        )

    def tail_rule(self, tol=1e-10, eps=None, xbar=None):
        """Finite horizon ``T`` with ``int_T^inf h^2 <= tol`` and ``h(T) xbar <= eps``."""
        if np.isfinite(self.horizon):
            return self.horizon
        lo_v = self.value_range[0]
        # smallest value c with int_{h <= c} h^2 <= tol, by bisection in log c
        a, b = -700.0, math.log(min(1.0, self.value_range[1]))
        if self.integrate_values(lambda y: np.asarray(y) ** 2, 0.0, math.exp(b)) <= tol:
            c = math.exp(b)
        else:
            for _ in range(80):
                m = 0.5 * (a + b)
                if self.integrate_values(lambda y: np.asarray(y) ** 2, lo_v, math.exp(m)) <= tol:
                    a = m
                else:
                    b = m
            c = math.exp(a)
        if eps is not None and xbar is not None and xbar > 0:
            c = min(c, eps / xbar)
        return max(self.min_horizon, float(self.level(c)))

    def sup_value(self, t_min=None):
        """Largest value of ``h`` used by rejection samplers (capped for unbounded kernels)."""
        if np.isfinite(self.value_range[1]):
            return self.value_range[1]
        t_min = t_min if t_min is not None else 1e-12 * min(self.horizon, 1.0)
        return float(self(np.array([t_min]))[0]) if self.monotone == "decreasing" else self.vcap

    def __repr__(self):
        trunc = f", horizon={self.horizon:g}" if self.truncated_flag else ""
        return f"Kernel({self.name}{trunc})"


class WienerGammaKernel(Kernel):
    """User-supplied nonnegative ``h`` on ``[0, support)``, integrated in ``t``."""

    monotone = None

    def __init__(self, h, support=1.0, name="wiener_gamma", horizon=None, tol=1e-10, expr=None):
        self.name = name
        self._h = h
        self.expr = expr
        self.support = float(support)
        self.requires_ilog = False
        self.horizon = self.support if horizon is None else min(float(horizon), self.support)
        self._check_condition()
        if not np.isfinite(self.horizon):
            self.horizon = self._tail_horizon(tol)
        t = np.linspace(0.0, self.horizon, 20001)[1:]
        vals = self._raw(t)
        if np.any(vals < 0):
            raise KernelConditionError("kernel must be nonnegative")
        self._vmax = float(vals.max())
        self.value_range = (0.0, self._vmax)
        self.breakpoints = ()
        self.truncated_flag = self.horizon < self.support
        self.h_at_horizon = 0.0

    def _raw(self, t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(self._h(t), dtype=float), t.shape).astype(float)

    def _check_condition(self):
        g = lambda t: float(np.log1p(self._raw(np.array([t]))[0]))
        if np.isfinite(self.support):
            val = _quad.quad(g, 0.0, self.support, split=False)
            if not np.isfinite(val):
                raise KernelConditionError("int log(1 + h) diverges")
            return
        inc = _quad.quad(g, 0.0, 1.0, split=False)
        for k in range(1, 41):
            inc = _quad.quad(g, 2.0 ** (k - 1), 2.0**k, split=False)
        if inc > 1e-6:
            raise KernelConditionError("int log(1 + h) diverges")

    def _tail_horizon(self, tol):
        g = lambda t: float(self._raw(np.array([t]))[0] ** 2)
        T = 1.0
        for _ in range(60):
            if _quad.quad(g, T, np.inf, split=False) <= tol:
                return T
            T *= 2.0
        raise DivergenceError("no finite horizon reaches the tail tolerance")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= 0.0) & (t < self.horizon)
        out = np.where(inside, self._raw(np.where(inside, t, 0.0)), 0.0)
        return out if out.ndim else float(out)

    def _tquad(self, g, complex_=False):
        q = _quad.cquad if complex_ else _quad.quad
        return q(g, 0.0, self.horizon, split=False, limit=500)

    def level(self, c):
        c = np.atleast_1d(np.asarray(c, dtype=float))
        out = np.array([self._tquad(lambda t, ck=ck: float(self(t) > ck)) for ck in c])
        return out if out.size > 1 else float(out[0])

    def integrate_values(self, F, ylo=0.0, yhi=math.inf, complex_=False, points=(), **tol):
        def g(t):
            y = self(t)
            return F(y) if ylo < y <= yhi else 0.0

        return self._tquad(g, complex_)

    def upper_mass(self, c):
        return self.integrate_values(lambda y: y, float(c))

    @property
    def int_h(self):
        return self._tquad(lambda t: self(t))

    @property
    def int_h2(self):
        return self._tquad(lambda t: self(t) ** 2)

    def value_nodes(self, panels=64):
        t, w = _quad.panel_nodes(np.linspace(0.0, self.horizon, panels + 1))
        return self(t), w

    def truncated(self, horizon):
        if horizon >= self.horizon:
            return self
        return WienerGammaKernel(self._h, self.support, self.name, horizon, expr=self.expr)

    def tail_rule(self, tol=1e-10, eps=None, xbar=None):
        return self.horizon

    def sup_value(self, t_min=None):
        return self._vmax

    def __repr__(self):
        return f"Kernel(wiener_gamma, {self.expr or 'callable'}, support={self.support:g})"


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


def _gstar(t):
    t = np.asarray(t, dtype=float)
    hi_t, lo_t = float(e1(1e-300)), float(e1(700.0))
    mid = (t <= hi_t) & (t >= lo_t)
    out = np.where(t > hi_t, np.exp(-EULER - np.minimum(t, 745.0)), 700.0)
    if mid.any():
        out = out.copy()
        out[mid] = invert_monotone(e1, t[mid], (1e-300, 700.0), lambda c: -np.exp(-c) / c)
    return out


def _fstar(t):
    t = np.asarray(t, dtype=float)
    lo_t = float(gauss_tail(38.0))
    mid = (t > lo_t) & (t < 0.5)
    out = np.where(t >= 0.5, 0.0, 38.0)
    if mid.any():
        out = out.copy()
        out[mid] = invert_monotone(gauss_tail, t[mid], (0.0, 38.0), lambda c: -phi(c))
    return out


def _mstar(t):
    t = np.asarray(t, dtype=float)
    hi_t = float(m_tail(1e-12))
    mid = (t <= hi_t) & (t > 0.0)
    with np.errstate(over="ignore"):
        asym = np.sqrt(2.0 * np.exp(-EULER - 2.0 * SQRT2PI * t))
    out = np.where(t > hi_t, asym, 50.0)
    if mid.any():
        out = out.copy()
        out[mid] = invert_monotone(m_tail, t[mid], (1e-12, 50.0), lambda c: -phi(c) / c)
    return out


def _log_inv(t):
    return np.log(1.0 / t)


def _make_ou(**kw):
    return MonotoneKernel(
        "ou_exp", lambda t: np.exp(-t), lambda c: np.where(c < 1, -np.log(np.minimum(c, 1.0)), 0.0),
        lambda y: 1.0 / y, lambda c: np.where(c < 1, 1.0 - c, 0.0), 1.0, 0.5,
        math.inf, (0.0, 1.0), requires_ilog=True, min_horizon=40.0, **kw,
    )


def _make_bondesson(**kw):
    return MonotoneKernel(
        "bondesson_log", _log_inv, lambda c: np.minimum(1.0, np.exp(-c)), lambda y: np.exp(-y),
        lambda c: (1.0 + c) * np.exp(-c), 1.0, 2.0, 1.0, (0.0, math.inf), vcap=60.0, **kw,
    )


def _make_jurek(**kw):
    return MonotoneKernel(
        "jurek_t", lambda t: t, lambda c: np.clip(1.0 - c, 0.0, 1.0), lambda y: np.ones_like(y),
        lambda c: np.where(c < 1, 0.5 * (1.0 - c * c), 0.0), 0.5, 1.0 / 3.0, 1.0, (0.0, 1.0),
        monotone="increasing", **kw,
    )


def _make_arcsine(**kw):
    return MonotoneKernel(
        "arcsine_cos", lambda t: np.cos(0.5 * np.pi * t),
        lambda c: (2.0 / np.pi) * np.arccos(np.minimum(c, 1.0)),
        lambda y: (2.0 / np.pi) / np.sqrt(1.0 - y * y),
        lambda c: (2.0 / np.pi) * np.sqrt(np.maximum(0.0, 1.0 - c * c)),
        2.0 / np.pi, 0.5, 1.0, (0.0, 1.0), **kw,
    )


def _make_sqrtlog(half):
    top = 0.5 if half else 1.0
    vlo = SQRT_LOG2 if half else 0.0

    def make(**kw):
        return MonotoneKernel(
            "sqrtlog_half" if half else "sqrtlog_one",
            lambda t: np.sqrt(np.log(1.0 / t)),
            lambda c: np.minimum(top, np.exp(-c * c)),
            lambda y: 2.0 * y * np.exp(-y * y),
            lambda c: _upper_gamma_3_2(np.maximum(c, vlo) ** 2),
            float(_upper_gamma_3_2(vlo**2)), 0.5 * (1.0 + math.log(2.0)) if half else 1.0,
            top, (vlo, math.inf), breakpoints=(vlo,) if half else (), vcap=8.0, **kw,
        )

    return make


def _make_thorin(**kw):
    return MonotoneKernel(
        "thorin_gstar", _gstar, e1, lambda y: np.exp(-y) / y, lambda c: np.exp(-c), 1.0, 1.0,
        math.inf, (0.0, math.inf), requires_ilog=True, vcap=60.0, **kw,
    )


def _make_typeg(**kw):
    return MonotoneKernel(
        "typeg_fstar", _fstar, lambda c: gauss_tail(c), phi, phi, 1.0 / SQRT2PI, 0.5,
        0.5, (0.0, math.inf), vcap=40.0, **kw,
    )


def _make_mstar(**kw):
    return MonotoneKernel(
        "m_star", _mstar, m_tail, lambda y: phi(y) / y, gauss_tail, 0.5, 1.0 / SQRT2PI,
        math.inf, (0.0, math.inf), requires_ilog=True, vcap=40.0, **kw,
    )


_EXPR_NAMES = {k: getattr(np, k) for k in ("exp", "log", "log1p", "sqrt", "cos", "sin", "abs", "pi", "minimum", "maximum", "where")}


def _make_wiener_gamma(h=None, expr="1", support=1.0, horizon=None):
    if h is None:
        code = compile(str(expr), "<kernel expr>", "eval")

        def h(t, code=code):
            return eval(code, {"__builtins__": {}}, dict(_EXPR_NAMES, t=t, np=np))

    return WienerGammaKernel(h, float(support), horizon=horizon, expr=str(expr))


KERNELS = {
    "wiener_gamma": _make_wiener_gamma,
    "thorin_gstar": _make_thorin,
    "bondesson_log": _make_bondesson,
    "ou_exp": _make_ou,
    "typeg_fstar": _make_typeg,
    "m_star": _make_mstar,
    "jurek_t": _make_jurek,
    "arcsine_cos": _make_arcsine,
    "sqrtlog_half": _make_sqrtlog(True),
    "sqrtlog_one": _make_sqrtlog(False),
}

INVERSE_KERNELS = {
    "thorin_gstar": (e1, (1e-300, 700.0)),
    "typeg_fstar": (gauss_tail, (0.0, 38.0)),
    "m_star": (m_tail, (1e-12, 50.0)),
}


def make_kernel(name: str, **params) -> Kernel:
    """Build a catalog kernel by name; ``horizon`` truncates decreasing kernels."""
    try:
        factory = KERNELS[name]
    except KeyError:
        raise UnknownNameError(f"unknown kernel {name!r}; choose from {sorted(KERNELS)}") from None
    return factory(**params)


def kernel_moments(h: Kernel, p: int) -> float:
    return h.moment(p)


def round_trip_errors(name: str, n: int = 100) -> np.ndarray:
    """``|F(h(t)) - t| / (1 + |t|)`` at ``n`` points ``t`` spread over the range of ``F``.

    ``F`` is the forward map whose inverse defines the kernel ``name`` (one of
    :data:`INVERSE_KERNELS`); the points are images of a log grid on its bracket.
    """
    forward, (lo, hi) = INVERSE_KERNELS[name]
    c = np.geomspace(max(lo, 1e-12), hi, n + 2)[1:-1]
    t = np.asarray(forward(c), dtype=float)
    h = make_kernel(name)
    return np.abs(np.asarray(forward(h(t)), dtype=float) - t) / (1.0 + np.abs(t))


# (int h, int h^2) in closed form for the elementary kernels
ELEMENTARY_MOMENTS = {
    "ou_exp": (1.0, 0.5),
    "bondesson_log": (1.0, 2.0),
    "jurek_t": (0.5, 1.0 / 3.0),
    "arcsine_cos": (2.0 / math.pi, 0.5),
}


def moment_errors(name: str) -> dict:
    """Errors of ``int_h``/``int_h2`` and of their value-space quadratures against closed forms."""
    h = make_kernel(name)
    m1, m2 = ELEMENTARY_MOMENTS[name]
    return {
        "int_h": abs(h.int_h - m1),
        "int_h2": abs(h.int_h2 - m2),
        "quad_h": abs(h.integrate_values(lambda y: y) - m1),
        "quad_h2": abs(h.integrate_values(lambda y: y * y) - m2),
    }
