"""Law of a scalar stochastic integral ``int h dX`` at the level of triplets.

If ``X`` is the Lévy process with ``L(X_1) = mu = (gamma, a, nu)``, the law
``mu_h`` of ``int_0^T h(t) dX_t`` has cumulant ``int C_mu(h(t) z) dt``, Gaussian
variance ``a int h^2``, Lévy measure

    nu_h(B) = int_0^T dt int 1_B(h(t) x) nu(dx),

and the drift given by :func:`integrated_drift`.  ``nu_h`` is kept lazy as a
:class:`PushforwardMeasure` holding ``(nu, h)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _quad
from .errors import DivergenceError, IlogViolationError, InadmissibleClassError
from .kernels import Kernel, phi
from .levy import (
    AClassMeasure,
    AtomicMeasure,
    DensityMeasure,
    LevyMeasure,
    LevyTriplet,
    RejectionSampler,
    cumulant_transform,
    ilog_check,
    polar_decompose,
)


def _require_ilog(mu, h):
    if h.requires_ilog:
        ok, _ = ilog_check(mu)
        if not ok:
            raise IlogViolationError(f"kernel {h.name} needs a driver with finite log-moment")


def _compensator_shift(nu, y):
    """``int x (1_{|x|<=1} - 1_{|x|<=1/y}) nu(dx)`` for a kernel value ``y > 0``."""
    if y > 1.0:
        return nu.first_moment(1.0 / y, 1.0)
    if y < 1.0:
        return -nu.first_moment(1.0, 1.0 / y)
    return 0.0


# Gauss-Legendre panels in t for kernels integrated in time
TIME_PANELS = 16


class PushforwardMeasure(LevyMeasure):
    """``nu_h(B) = int dt int 1_B(h(t) x) nu(dx)`` for a nonnegative kernel ``h``."""

    name = "pushforward"

    def __init__(self, base: LevyMeasure, kernel: Kernel):
        super().__init__()
        self.base = base
        self.kernel = kernel
        self.diagnostics = {}

    @property
    def is_zero(self):
        return self.base.is_zero

    def sides(self):
        return self.base.sides()

    @property
    def finite_activity(self):
        return self.base.finite_activity and bool(np.isfinite(self.kernel.level(0.0)))

    def _x_band(self, rmin, rmax):
        vlo, vhi = self.kernel.value_range
        lo = rmin / vhi if np.isfinite(vhi) else 0.0
        hi = rmax / vlo if vlo > 0 else math.inf
        return lo, hi

    def _integrate_side(self, f, rmin, rmax, sign, complex_, tol):
        k = self.kernel
        if k.monotone is None:
            return self._integrate_side_time(f, rmin, rmax, sign, complex_, tol)

        def inner_one(x):
            ax = abs(x)
            # integrands built from the compensated jump kernel jump at |y x| = 1
            return k.integrate_values(lambda y: f(y * x), rmin / ax, rmax / ax, complex_, points=(1.0 / ax,))

        def inner(x):
            x = np.asarray(x, dtype=float)
            if x.ndim == 0:
                return inner_one(float(x))
            return np.array([inner_one(v) for v in x])

        lo, hi = self._x_band(rmin, rmax)
        return self.base.integrate(inner, lo, hi, sign, complex_, **tol)

    def _integrate_side_time(self, f, rmin, rmax, sign, complex_, tol):
        """Time on the outside, on fixed Gauss-Legendre panels.

        For kernels without a value density the inner ``x``-integral is split
        where ``|h(t) x| = 1``; it is then smooth in ``t``, so a fixed rule in
        ``t`` converges fast and bounds the number of base integrals.
        """
        base = self.base
        ys, ws = self.kernel.value_nodes(TIME_PANELS)
        total = 0j if complex_ else 0.0
        for y, w in zip(ys, ws):
            if y <= 0.0 or w == 0.0:
                continue
            lo, hi, cut = rmin / y, rmax / y, 1.0 / y
            g = lambda x, y=y: f(y * np.asarray(x, dtype=float))
            part = base.integrate(g, lo, min(hi, cut), sign, complex_, **tol)
            total += w * (part + base.integrate(g, max(lo, cut), hi, sign, complex_, **tol))
        return total

    def _lk_by_time(self, z):
        """``sum_k w_k [C_base(z y_k) + i z y_k D(y_k)]`` on the time nodes.

        ``D(y) = int x (1_{|x|<=1} - 1_{|x|<=1/y}) nu(dx)`` moves the
        compensator from ``|x| <= 1`` to ``|y x| <= 1``; the oscillatory part
        stays inside the base measure's own cumulant routine.
        """
        if z == 0.0 or self.base.is_zero:
            return 0j
        ys, ws = self.kernel.value_nodes(TIME_PANELS)
        total = 0j
        for y, w in zip(ys, ws):
            if y <= 0.0 or w == 0.0:
                continue
            total += w * (self.base.lk_integral(z * y) + 1j * z * y * _compensator_shift(self.base, y))
        return total

    def _level_between(self, x, lo, hi):
        ax = np.abs(np.asarray(x, dtype=float))
        out = self.kernel.level(lo / ax)
        if np.isfinite(hi):
            out = out - self.kernel.level(hi / ax)
        return out

    def tail(self, r, sign=None):
        lo, _ = self._x_band(r, math.inf)
        return self.base.integrate(lambda x: self._level_between(x, r, math.inf), lo, math.inf, sign)

    def mass(self, lo, hi):
        total = 0.0
        for sign, a, b in ((1, max(lo, 0.0), hi), (-1, max(-hi, 0.0), -lo)):
            if b <= a or sign not in self.sides():
                continue
            xa, xb = self._x_band(a, b)
            total += self.base.integrate(lambda x, a=a, b=b: self._level_between(x, a, b), xa, xb, sign)
        return total

    def density(self, r):
        """Density of ``nu_h`` at ``r != 0`` (needs a monotone kernel or a density base)."""
        r = float(r)
        sign = 1 if r > 0 else -1
        ar = abs(r)
        base, k = self.base, self.kernel
        if isinstance(base, AtomicMeasure):
            if k.monotone is None:
                raise ValueError("pushforward of atoms under a non-monotone kernel has no density")
            sel = np.sign(base.locs) == sign
            x = np.abs(base.locs[sel])
            return float(np.sum(base.masses[sel] * k.value_density(ar / x) / x))
        if hasattr(base, "density"):
            return k.integrate_values(lambda y: float(base.density(sign * ar / y)) / y, 0.0, math.inf,
                                      epsabs=1e-13, epsrel=1e-11)
        raise ValueError("base measure has no density")

    def density_view(self):
        """The same measure as a :class:`DensityMeasure` (monotone kernels only)."""
        k, base = self.kernel, self.base
        if k.monotone is None or not (isinstance(base, AtomicMeasure) or hasattr(base, "density")):
            return None
        # the A-class density is itself an integral with an edge singularity;
        # nesting it under the kernel integral is far slower than integrating in x
        if isinstance(base, AClassMeasure):
            return None
        vlo, vhi = k.value_range
        support, points = {}, set()
        for sign in self.sides():
            if isinstance(base, AtomicMeasure):
                ax = np.abs(base.locs[np.sign(base.locs) == sign])
                support[sign] = (vlo * ax.min(), vhi * ax.max())
                points |= {float(v) for x in ax for v in (vlo * x, vhi * x) if 0 < v < np.inf}
                points |= {float(b * x) for x in ax for b in k.breakpoints}
            else:
                support[sign] = (0.0, math.inf)
        dens = np.vectorize(lambda r: self.density(r) if r != 0 else 0.0, otypes=[float])
        return DensityMeasure(dens, support, sorted(points), name=f"{base.name}|{k.name}")

    def lk_integral(self, z):
        if self.kernel.monotone is None:
            return self._lk_by_time(z)
        view = self.density_view()
        if view is None:
            return super().lk_integral(z)
        return view.lk_integral(z)

    def _make_sampler(self, eps):
        """Rejection sampler on ``(t, x)``: ``t`` uniform, ``x`` from the truncated base law.

        Proposals use ``x`` above ``eps / H`` with ``H`` the largest kernel
        value used; unbounded kernels are capped at ``t_min`` and kernels with
        infinite support at a horizon beyond which ``h(T) |x| <= eps`` for all
        but a ``1e-9`` fraction of base mass.  The neglected mass is recorded in
        ``diagnostics['dropped_mass']``.
        """
        k = self.kernel
        unbounded = not np.isfinite(k.value_range[1])
        t_min = 1e-12 * min(k.horizon, 1.0) if (unbounded and k.monotone == "decreasing") else 0.0
        H = k.sup_value(t_min) if t_min > 0 else k.sup_value()
        x_lo = eps / H
        proposal = self.base.sampler_above(x_lo)
        if np.isfinite(k.horizon):
            T = k.horizon
        else:
            t0 = self.base.tail(x_lo)
            r = max(x_lo, 1.0)
            while self.base.tail(r) > 1e-9 * t0 and r < 1e300:
                r *= 2.0
            T = float(k.level(eps / r))
        exact = self.tail(eps)
        if k.monotone == "decreasing":
            def captured_at(x):
                lev = np.clip(k.level(eps / np.abs(np.asarray(x, dtype=float))), t_min, T)
                return lev - t_min
            captured = self.base.integrate(captured_at, x_lo, math.inf)
        else:
            captured = exact
        self.diagnostics[eps] = {"dropped_mass": max(0.0, exact - captured), "horizon": T, "t_min": t_min}
        span = T - t_min

        def accept(x, rng):
            t = t_min + span * rng.random(x.size)
            y = k(t) * x
            return y, np.abs(y) > eps

        rate = exact / max(span * proposal.mass, 1e-300)
        return RejectionSampler(exact, proposal, accept, rate_hint=min(1.0, rate))

    def nodes(self):
        x, wx = self.base.nodes()
        y, wy = self.kernel.value_nodes()
        return (x[:, None] * y[None, :]).ravel(), (wx[:, None] * wy[None, :]).ravel()


@dataclass(frozen=True)
class IntegratedTriplet:
    gamma_h: float
    a_h: float
    nu_h: PushforwardMeasure
    mu: LevyTriplet
    kernel: Kernel

    def as_triplet(self) -> LevyTriplet:
        return LevyTriplet(self.gamma_h, self.a_h, self.nu_h, f"{self.mu.name}|{self.kernel.name}")


def integrated_drift(mu: LevyTriplet, h: Kernel) -> float:
    """Drift of ``mu_h`` in the ``1_{|x|<=1}`` convention.

    ``gamma_h = gamma int h + int nu(dx) x int h(t) (1_{|h(t) x| <= 1} - 1_{|x| <= 1}) dt``.
    With ``A(c) = int h 1_{h > c} dt`` the inner time integral is ``-A(1/|x|)``
    for ``|x| <= 1`` and ``int h - A(1/|x|)`` for ``|x| > 1``.
    """
    _require_ilog(mu, h)
    int_h = h.int_h
    gamma_h = mu.gamma * int_h
    nu = mu.nu
    if nu.is_zero:
        return gamma_h
    if h.monotone is None:
        # no value density: sum the compensator shift over the time nodes
        ys, ws = h.value_nodes(TIME_PANELS)
        return gamma_h - sum(w * y * _compensator_shift(nu, y) for y, w in zip(ys, ws) if y > 0.0 and w != 0.0)
    vhi = h.value_range[1]
    small_lo = 1.0 / vhi if np.isfinite(vhi) else 0.0
    if small_lo < 1.0:
        gamma_h -= nu.integrate(
            lambda x: np.asarray(x) * h.upper_mass(1.0 / np.abs(np.asarray(x, dtype=float))),
            small_lo, 1.0,
        )
    big = nu.integrate(
        lambda x: np.asarray(x) * (int_h - h.upper_mass(1.0 / np.abs(np.asarray(x, dtype=float)))),
        1.0, math.inf,
    )
    if not np.isfinite(big):
        raise DivergenceError("drift integral of the integrated law diverges")
    return gamma_h + big


def pushforward_levy(mu: LevyTriplet, h: Kernel) -> PushforwardMeasure:
    _require_ilog(mu, h)
    return PushforwardMeasure(mu.nu, h)


def integrated_triplet(mu: LevyTriplet, h: Kernel) -> IntegratedTriplet:
    return IntegratedTriplet(integrated_drift(mu, h), mu.a * h.int_h2, pushforward_levy(mu, h), mu, h)


def cumulant_of_integral(mu: LevyTriplet, h: Kernel, z: float) -> complex:
    """``int_0^T C_mu(h(t) z) dt``, computed in value space."""
    _require_ilog(mu, h)
    z = float(z)
    if z == 0.0:
        return 0j
    return h.integrate_values(lambda y: cumulant_transform(mu, y * z), 0.0, math.inf, complex_=True)


def reassembled_cumulant(it: IntegratedTriplet, z: float) -> complex:
    """Lévy-Khintchine form evaluated from ``(gamma_h, a_h, nu_h)``."""
    return cumulant_transform(it.as_triplet(), z)


# ---------------------------------------------------------------------------
# Closed-form radial profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialProfile:
    kind: str  # "density", "k_function", "g_function", "l_function"
    evaluator: object

    def __call__(self, r):
        return self.evaluator(r)


PROFILE_KIND = {1: "density", 2: "k_function", 4: "k_function", 5: "k_function",
                6: "g_function", 7: "g_function", 8: "l_function"}


def _radial(mu, sign):
    polar = polar_decompose(mu.nu)
    if polar.weights.get(sign, 0.0) <= 0.0:
        raise InadmissibleClassError(f"no Lévy mass on side {sign:+d}")
    return polar.weights[sign], polar.radial[sign]


def _k_function(radial):
    """``k(r) = r * radial density`` for a selfdecomposable radial measure."""
    if not isinstance(radial, DensityMeasure):
        raise InadmissibleClassError("selfdecomposable driver needs an absolutely continuous Lévy measure")
    grid = np.geomspace(1e-6, 1e3, 200)
    k = grid * radial.density(grid)
    if np.any(np.diff(k) > 1e-12 * np.abs(k[:-1]) + 1e-300):
        raise InadmissibleClassError("driver is not selfdecomposable (k-function increases)")
    return lambda u: u * radial.density(u)


def radial_profile_oracle(example_id: int, mu: LevyTriplet, r: float, sign: int = 1, kernel: Kernel = None) -> float:
    """Closed-form radial profile of ``nu_{mu_h}`` for the catalog class ``example_id``.

    Example 1 returns the Lévy density itself (Gamma driver, ``kernel``
    required); 2, 4, 5 return k-functions; 6, 7 g-functions; 8 the l-function.
    """
    r = float(r)
    tight = dict(epsabs=1e-14, epsrel=1e-12)
    if example_id == 1:
        if mu.name != "gamma" or kernel is None:
            raise InadmissibleClassError("the generalized gamma convolution oracle needs a Gamma driver and a kernel")
        alpha, beta = mu.params.get("alpha", 1.0), mu.params.get("beta", 1.0)
        return alpha * kernel.integrate_values(lambda y: math.exp(-beta * r / y) / r, 0.0, math.inf, **tight)
    if example_id not in PROFILE_KIND:
        raise InadmissibleClassError(f"no closed-form profile for class {example_id}")
    if example_id in (2, 5, 7):
        ok, _ = ilog_check(mu)
        if not ok:
            raise InadmissibleClassError("driver violates the log-moment condition")
    _, radial = _radial(mu, sign)
    if example_id == 2:
        return radial.integrate(lambda s: np.exp(-r / np.asarray(s)), **tight)
    if example_id == 4:
        k = _k_function(radial)
        return _quad.quad(lambda s: float(k(r / s)) * math.exp(-s), 0.0, math.inf, **tight)
    if example_id == 5:
        return radial.tail(r, 1)
    if example_id == 6:
        root = math.sqrt(r)
        return radial.integrate(lambda s: phi(root / np.asarray(s)) / np.asarray(s), **tight)
    if example_id == 7:
        root = math.sqrt(r)
        return radial.integrate(lambda s: phi(root / np.asarray(s)), **tight)
    return radial.integrate(lambda x: 1.0 / np.asarray(x), r, math.inf, **tight)


def extract_radial_profile(example_id: int, nu_h: PushforwardMeasure, r: float, sign: int = 1, weight: float = 1.0) -> float:
    """Profile of ``nu_h`` in the form the matching oracle uses.

    ``weight`` is the spherical weight ``lambda_h(sign)``; the radial density
    of ``nu_h`` is its density on the given side divided by that weight.
    """
    kind = PROFILE_KIND.get(example_id)
    dens = lambda s: nu_h.density(sign * s) / weight
    if kind in ("density", "l_function"):
        return dens(r)
    if kind == "k_function":
        return r * dens(r)
    root = math.sqrt(r)
    return dens(root) if example_id == 6 else root * dens(root)


def a_class_levy(rho: LevyMeasure, B) -> float:
    """``nu(B)`` for the A-class Lévy measure built from ``rho``; ``B = (lo, hi]``."""
    lo, hi = B
    return AClassMeasure(rho).mass(lo, hi)
