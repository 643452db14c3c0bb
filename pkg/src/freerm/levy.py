"""Classical infinitely divisible laws on the real line.

A law is stored as a Lévy triplet ``(gamma, a, nu)`` in the truncation
convention ``1_{|x| <= 1}``:

    C(z) = i gamma z - a z^2 / 2 + int (e^{izx} - 1 - izx 1_{|x|<=1}) nu(dx).

Lévy measures are small immutable objects exposing radial-band integration,
tails, jump samplers above a cutoff, and a fixed-node discretization used by
the free engine.  Integration over a band always means the set
``{x : rmin < |x| <= rmax}``, optionally restricted to one sign.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from . import _quad
from .errors import (
    EmptyTruncationError,
    QuadratureError,
    UnknownNameError,
    ZeroMeasureError,
)

SIGNS = (1, -1)
TABLE_KNOTS = 4096


def lk_integrand(z, x):
    """Integrand ``e^{izx} - 1 - izx 1_{|x|<=1}`` without cancellation at small ``zx``."""
    if isinstance(x, float):
        u = z * x
        re = -2.0 * math.sin(0.5 * u) ** 2
        if abs(x) > 1.0:
            return complex(re, math.sin(u))
        if abs(u) < 1e-3:
            return complex(re, -(u**3) / 6.0 + u**5 / 120.0)
        return complex(re, math.sin(u) - u)
    x = np.asarray(x, dtype=float)
    u = z * x
    re = -2.0 * np.sin(0.5 * u) ** 2
    s = np.sin(u)
    series = -(u**3) / 6.0 + u**5 / 120.0
    im = np.where(np.abs(x) <= 1.0, np.where(np.abs(u) < 1e-3, series, s - u), s)
    return re + 1j * im


def _fourier(g, a, b, kind, w):
    """``int_a^b g(r) cos(w r) dr`` (or ``sin``) by QAWO / QAWF."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if np.isfinite(b):
            val, err = integrate.quad(g, a, b, weight=kind, wvar=w, limit=400, epsabs=1e-11, epsrel=1e-10)
        else:
            val, err = integrate.quad(g, a, np.inf, weight=kind, wvar=w, limlst=200, epsabs=1e-11, epsrel=1e-10)
    if not np.isfinite(val) or err > max(1e-7, 1e-7 * abs(val)):
        raise QuadratureError(f"Fourier-weighted integral did not converge on ({a}, {b}), w={w}")
    return val


def _sides(sign):
    return SIGNS if sign is None else (int(sign),)


# ---------------------------------------------------------------------------
# Jump samplers
# ---------------------------------------------------------------------------


class JumpSampler:
    """Draws from ``nu`` restricted to ``{|x| > eps}`` and normalized."""

    mass: float = 0.0

    def draw(self, rng, size):
        raise NotImplementedError

    def __call__(self, rng, size=None):
        if self.mass <= 0.0:
            raise EmptyTruncationError("no Lévy mass above the cutoff")
        if size is None:
            return float(self.draw(rng, 1)[0])
        return self.draw(rng, int(size))


class AtomicSampler(JumpSampler):
    def __init__(self, locs, masses):
        self.locs = np.asarray(locs, dtype=float)
        self.masses = np.asarray(masses, dtype=float)
        self.mass = float(self.masses.sum())

    def draw(self, rng, size):
        if self.locs.size == 1:
            return np.full(size, self.locs[0])
        idx = rng.choice(self.locs.size, size=size, p=self.masses / self.mass)
        return self.locs[idx]


class TabulatedSampler(JumpSampler):
    """Inverse-CDF sampler on a log-spaced tail table, one table per sign.

    The tail ``nu((r, inf))`` is tabulated on TABLE_KNOTS geometric knots
    starting at the cutoff; the inverse is a monotone (PCHIP) interpolant of
    ``log r`` against the normalized cumulative mass.
    """

    def __init__(self, measure, eps):
        self.parts = []
        for sign, (rlo, rhi) in measure.support.items():
            start = max(eps, rlo)
            if start >= rhi:
                continue
            rmax = rhi if np.isfinite(rhi) else _tail_horizon(measure, start, sign)
            knots = np.geomspace(start, rmax, TABLE_KNOTS)
            x, w = _quad.panel_nodes(knots)
            inc = (w * measure.density(sign * x)).reshape(-1, _quad.GL_X.size).sum(axis=1)
            beyond = 0.0 if np.isfinite(rhi) else measure.tail(rmax, sign)
            tails = np.append(beyond + np.cumsum(inc[::-1])[::-1], beyond)
            total = tails[0]
            if total <= 0.0:
                continue
            cdf = 1.0 - tails / total
            cdf_u, idx = np.unique(cdf, return_index=True)
            inverse = PchipInterpolator(cdf_u, np.log(knots[idx]), extrapolate=False)
            self.parts.append((sign, total, inverse, cdf_u[-1], rmax))
        self.mass = float(sum(p[1] for p in self.parts))

    def draw(self, rng, size):
        out = np.empty(size)
        weights = np.array([p[1] for p in self.parts]) / self.mass
        which = rng.choice(len(self.parts), size=size, p=weights) if len(self.parts) > 1 else np.zeros(size, int)
        for k, (sign, _, inverse, top, rmax) in enumerate(self.parts):
            sel = which == k
            u = rng.random(int(sel.sum()))
            r = np.exp(inverse(np.minimum(u, top)))
            out[sel] = sign * np.where(np.isfinite(r), r, rmax)
        return out


class RejectionSampler(JumpSampler):
    """Draws from a proposal and keeps draws accepted by ``accept(x, rng)``.

    ``accept`` returns the transformed values and a boolean mask.  Batch
    sizes depend only on the request and the fixed rate hint, so the draws
    are a function of the generator state alone (no state is shared between
    calls or threads).
    """

    def __init__(self, mass, proposal, accept, rate_hint=0.5):
        self.mass = float(mass)
        self.proposal = proposal
        self.accept = accept
        self.rate = min(1.0, max(rate_hint, 1e-3))

    def draw(self, rng, size):
        got = []
        n = 0
        while n < size:
            batch = int(1.2 * (size - n) / self.rate) + 16
            values, keep = self.accept(self.proposal.draw(rng, batch), rng)
            values = values[keep]
            got.append(values)
            n += values.size
        return np.concatenate(got)[:size] if got else np.zeros(0)


class _DirectSampler(JumpSampler):
    def __init__(self, mass, draw):
        self.mass = float(mass)
        self._draw = draw

    def draw(self, rng, size):
        return np.asarray(self._draw(rng, size), dtype=float)


class PolarSampler(JumpSampler):
    """Samples ``xi * r`` with ``xi`` from the spherical weights and ``r`` radial."""

    def __init__(self, polar, eps):
        self.parts = []
        for sign in SIGNS:
            lam = polar.weights.get(sign, 0.0)
            if lam <= 0.0:
                continue
            inner = polar.radial[sign].sampler_above(eps)
            if inner.mass > 0.0:
                self.parts.append((sign, lam * inner.mass, inner))
        self.mass = float(sum(p[1] for p in self.parts))

    def draw(self, rng, size):
        out = np.empty(size)
        weights = np.array([p[1] for p in self.parts]) / self.mass
        which = rng.choice(len(self.parts), size=size, p=weights)
        for k, (sign, _, inner) in enumerate(self.parts):
            sel = which == k
            out[sel] = sign * inner.draw(rng, int(sel.sum()))
        return out


def _tail_horizon(measure, start, sign, rel=1e-13):
    """Radius beyond which the tail is below ``rel`` times the tail at ``start``."""
    t0 = measure.tail(start, sign)
    r = start
    for _ in range(200):
        r *= 2.0
        if measure.tail(r, sign) <= rel * t0 or r > start * 1e18:
            return r
    return r


# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------


class LevyMeasure:
    """Base class; subclasses implement ``_integrate_side``."""

    name = "measure"

    def __init__(self):
        self._samplers = {}
        self._lock = threading.Lock()

    # -- structure ---------------------------------------------------------
    @property
    def is_zero(self):
        return False

    @property
    def finite_activity(self):
        """True when ``nu`` has finite total mass and can be sampled without a cutoff."""
        return False

    def sides(self):
        return SIGNS

    # -- integration ------------------------------------------------------
    def _integrate_side(self, f, rmin, rmax, sign, complex_, tol):
        raise NotImplementedError

    def integrate(self, f, rmin=0.0, rmax=np.inf, sign=None, complex_=False, **tol):
        """``int f(x) nu(dx)`` over ``{rmin < |x| <= rmax}`` (and sign, if given)."""
        total = 0j if complex_ else 0.0
        if rmax <= rmin:
            return total
        for s in _sides(sign):
            if s in self.sides():
                total += self._integrate_side(f, rmin, rmax, s, complex_, tol)
        return total

    def tail(self, r, sign=None):
        """``nu({x : sign x > r})``, both signs when ``sign`` is None."""
        return self.integrate(lambda x: np.ones_like(np.asarray(x, dtype=float)), r, np.inf, sign)

    def mass(self, lo, hi):
        """``nu((lo, hi])`` for a real interval."""
        total = 0.0
        if hi > 0.0:
            total += self.integrate(lambda x: np.ones_like(np.asarray(x, dtype=float)), max(lo, 0.0), hi, 1)
        if lo < 0.0:
            total += self.integrate(lambda x: np.ones_like(np.asarray(x, dtype=float)), max(-hi, 0.0), -lo, -1)
        return total

    def mass_above(self, eps):
        return self.tail(eps)

    def first_moment(self, rmin, rmax):
        """Signed ``int x nu(dx)`` over the band ``rmin < |x| <= rmax``."""
        return self.integrate(lambda x: np.asarray(x, dtype=float), rmin, rmax)

    def second_moment(self, rmin, rmax):
        return self.integrate(lambda x: np.asarray(x, dtype=float) ** 2, rmin, rmax)

    def lk_integral(self, z):
        """Jump part of the classical cumulant at real ``z``."""
        if z == 0.0:
            return 0j
        return self.integrate(lambda x: lk_integrand(z, x), complex_=True)

    # -- sampling ---------------------------------------------------------
    def _make_sampler(self, eps):
        raise NotImplementedError

    def sampler_above(self, eps):
        key = float(eps)
        with self._lock:
            s = self._samplers.get(key)
        if s is None:
            s = self._make_sampler(key)
            with self._lock:
                self._samplers[key] = s
        return s

    # -- discretization ---------------------------------------------------
    def nodes(self):
        """Atoms ``(x, w)`` whose weighted sums approximate integrals against ``nu``."""
        raise NotImplementedError


class AtomicMeasure(LevyMeasure):
    """Finite sum of point masses; the empty measure is the zero measure."""

    name = "atomic"

    def __init__(self, locs=(), masses=()):
        super().__init__()
        locs = np.atleast_1d(np.asarray(locs, dtype=float))
        masses = np.atleast_1d(np.asarray(masses, dtype=float))
        if locs.shape != masses.shape:
            raise ValueError("locations and masses differ in length")
        if np.any(masses < 0) or np.any(locs == 0.0):
            raise ValueError("atoms need positive mass away from the origin")
        keep = masses > 0
        self.locs = locs[keep]
        self.masses = masses[keep]

    @property
    def is_zero(self):
        return self.locs.size == 0

    def sides(self):
        return tuple(s for s in SIGNS if np.any(np.sign(self.locs) == s))

    @property
    def finite_activity(self):
        return True

    def _select(self, rmin, rmax, sign):
        r = np.abs(self.locs)
        return (r > rmin) & (r <= rmax) & (np.sign(self.locs) == sign)

    def _integrate_side(self, f, rmin, rmax, sign, complex_, tol):
        sel = self._select(rmin, rmax, sign)
        if not sel.any():
            return 0.0
        vals = np.asarray(f(self.locs[sel]))
        return complex(np.sum(vals * self.masses[sel])) if complex_ else float(np.sum(vals * self.masses[sel]))

    def lk_integral(self, z):
        if self.is_zero:
            return 0j
        return complex(np.sum(lk_integrand(z, self.locs) * self.masses))

    def _make_sampler(self, eps):
        sel = np.abs(self.locs) > eps
        return AtomicSampler(self.locs[sel], self.masses[sel])

    def nodes(self):
        return self.locs.copy(), self.masses.copy()

    def __repr__(self):
        return f"AtomicMeasure({self.locs.tolist()}, {self.masses.tolist()})"


class DensityMeasure(LevyMeasure):
    """Absolutely continuous Lévy measure ``nu(dx) = density(x) dx``.

    ``support`` maps each sign to the radial interval ``(rlo, rhi)`` carrying
    mass on that side.  ``polar_weights`` optionally fixes the spherical
    weights used by :func:`polar_decompose` (default 1 on each side).
    A finite measure may supply ``draw(rng, size)`` for its normalized law;
    it then samples by rejection instead of from a tail table.
    """

    name = "density"

    def __init__(self, density, support, breakpoints=(), polar_weights=None, name=None, draw=None):
        super().__init__()
        self.density = density
        self.draw = draw
        self.support = {int(s): (float(v[0]), float(v[1])) for s, v in support.items()}
        self.breakpoints = tuple(breakpoints)
        self.polar_weights = dict(polar_weights) if polar_weights else None
        if name:
            self.name = name

    def sides(self):
        return tuple(self.support)

    def _band(self, rmin, rmax, sign):
        rlo, rhi = self.support[sign]
        return max(rmin, rlo), min(rmax, rhi)

    def _integrate_side(self, f, rmin, rmax, sign, complex_, tol):
        lo, hi = self._band(rmin, rmax, sign)
        if hi <= lo:
            return 0.0

        def g(r):
            return f(sign * r) * self.density(sign * r)

        if complex_:
            return _quad.cquad(g, lo, hi, self.breakpoints, **tol)
        return _quad.quad(g, lo, hi, self.breakpoints, **tol)

    def lk_integral(self, z):
        """Cumulant jump integral, Fourier-weighted quadrature where ``zx`` oscillates.

        On ``|x| <= 20/|z|`` the integrand is integrated directly.  Beyond, the
        ``cos``/``sin`` parts use QUADPACK's weighted rules (QAWO on finite
        pieces, QAWF on the infinite tail) applied to the nonoscillatory
        density, and the compensator and ``-1`` terms are integrated apart.
        """
        if z == 0.0:
            return 0j
        w = abs(z)
        sz = 1.0 if z > 0 else -1.0
        cut = 20.0 / w
        total = 0j
        for sign, (rlo, rhi) in self.support.items():
            near_hi = min(cut, rhi)
            if near_hi > rlo:
                total += self._integrate_side(lambda x: lk_integrand(z, x), rlo, near_hi, sign, True, {})
            lo = max(cut, rlo)
            if rhi <= lo:
                continue
            dens = lambda r, sign=sign: float(self.density(sign * r))
            pieces = []
            if lo < 1.0:
                pieces.append((lo, min(1.0, rhi), True))
            if rhi > 1.0:
                pieces.append((max(lo, 1.0), rhi, False))
            for a, b, compensated in pieces:
                c = _fourier(dens, a, b, "cos", w)
                sn = _fourier(dens, a, b, "sin", w)
                mass = _quad.quad(dens, a, b, self.breakpoints)
                im = sign * sz * sn
                if compensated:
                    im -= z * sign * _quad.quad(lambda r: r * dens(r), a, b, self.breakpoints)
                total += complex(c - mass, im)
        return total

    @property
    def finite_activity(self):
        return self.draw is not None

    def _make_sampler(self, eps):
        if self.draw is None:
            return TabulatedSampler(self, eps)
        mass = self.tail(eps)
        proposal = _DirectSampler(self.tail(0.0), self.draw)
        accept = lambda x, rng: (x, np.abs(x) > eps)
        return RejectionSampler(mass, proposal, accept, rate_hint=mass / max(proposal.mass, 1e-300))

    def nodes(self):
        xs, ws = [], []
        for sign, (rlo, rhi) in self.support.items():
            lo = max(rlo, 1e-16)
            hi = min(rhi, 1e12)
            x, w = _quad.log_panels(lo, hi, per_decade=4)
            xs.append(sign * x)
            ws.append(w * self.density(sign * x))
        return np.concatenate(xs), np.concatenate(ws)

    def __repr__(self):
        return f"DensityMeasure({self.name})"


class PolarMeasure(LevyMeasure):
    """``nu(B) = sum_xi lambda(xi) int 1_B(r xi) nu_xi(dr)``.

    ``radial[xi]`` is a Lévy measure carried by ``(0, inf)``.
    """

    name = "polar"

    def __init__(self, weights, radial):
        super().__init__()
        self.weights = {int(k): float(v) for k, v in weights.items()}
        self.radial = {int(k): v for k, v in radial.items()}

    def sides(self):
        return tuple(s for s in SIGNS if self.weights.get(s, 0.0) > 0.0)

    def _integrate_side(self, f, rmin, rmax, sign, complex_, tol):
        lam = self.weights.get(sign, 0.0)
        if lam == 0.0:
            return 0.0
        inner = self.radial[sign].integrate(lambda r: f(sign * np.asarray(r)), rmin, rmax, 1, complex_, **tol)
        return lam * inner

    @property
    def finite_activity(self):
        return all(self.radial[s].finite_activity for s in self.sides())

    def _make_sampler(self, eps):
        return PolarSampler(self, eps)

    def nodes(self):
        xs, ws = [], []
        for sign in self.sides():
            x, w = self.radial[sign].nodes()
            xs.append(sign * x)
            ws.append(self.weights[sign] * w)
        return np.concatenate(xs), np.concatenate(ws)


class SideView(LevyMeasure):
    """Restriction of ``nu`` to one sign, reflected onto ``(0, inf)``."""

    name = "side"

    def __init__(self, base, sign, scale=1.0):
        super().__init__()
        self.base = base
        self.sign = int(sign)
        self.scale = float(scale)

    def sides(self):
        return (1,)

    @property
    def finite_activity(self):
        return self.base.finite_activity

    def _integrate_side(self, f, rmin, rmax, sign, complex_, tol):
        g = lambda x: f(np.abs(np.asarray(x, dtype=float)))
        return self.base.integrate(g, rmin, rmax, self.sign, complex_, **tol) / self.scale

    def _make_sampler(self, eps):
        base = self.base.sampler_above(eps)
        mass = self.tail(eps)

        def accept(x, rng):
            return np.abs(x), np.sign(x) == self.sign

        return RejectionSampler(mass, base, accept, rate_hint=mass * self.scale / max(base.mass, 1e-300))

    def nodes(self):
        x, w = self.base.nodes()
        sel = np.sign(x) == self.sign
        return np.abs(x[sel]), w[sel] / self.scale


class AClassMeasure(LevyMeasure):
    """Lévy measure of the A class built from a Lévy measure ``rho``.

    ``nu(B) = int rho(ds) int a1(r; |s|) 1_B(r sign(s)) dr`` with the one-sided
    arcsine density ``a1(r; s) = 2/pi (s - r^2)^{-1/2}`` on ``0 < r < sqrt(s)``.
    The substitution ``r = sqrt(s) sin(theta)`` makes ``theta`` uniform on
    ``(0, pi/2)``, which is how both integration and sampling proceed.
    """

    name = "a_class"

    def __init__(self, rho):
        super().__init__()
        self.rho = rho

    def sides(self):
        return self.rho.sides()

    @property
    def finite_activity(self):
        return self.rho.finite_activity

    @staticmethod
    def _angles(s, rmin, rmax):
        root = np.sqrt(np.abs(s))
        t0 = np.arcsin(np.minimum(1.0, rmin / root))
        t1 = np.arcsin(np.minimum(1.0, rmax / root)) if np.isfinite(rmax) else np.full_like(root, 0.5 * np.pi)
        return root, t0, t1

    def _integrate_side(self, f, rmin, rmax, sign, complex_, tol):
        def inner(s):
            s = np.atleast_1d(np.asarray(s, dtype=float))
            root, t0, t1 = self._angles(s, rmin, rmax)
            out = np.zeros(s.shape, dtype=complex if complex_ else float)
            for k in range(s.size):
                if t1[k] <= t0[k]:
                    continue
                g = lambda th, rk=root[k]: f(sign * rk * np.sin(th))
                q = _quad.cquad if complex_ else _quad.quad
                out[k] = q(g, t0[k], t1[k], split=False)
            return (2.0 / np.pi) * out if out.size > 1 else (2.0 / np.pi) * out[0]

        return self.rho.integrate(inner, rmin**2, np.inf, sign, complex_, **tol)

    def tail(self, r, sign=None):
        def inner(s):
            root = np.sqrt(np.abs(np.asarray(s, dtype=float)))
            return (2.0 / np.pi) * np.arccos(np.minimum(1.0, r / root))

        return self.rho.integrate(inner, r**2, np.inf, sign)

    def mass(self, lo, hi):
        total = 0.0
        for sign, a, b in ((1, max(lo, 0.0), hi), (-1, max(-hi, 0.0), -lo)):
            if b <= a or sign not in self.sides():
                continue

            def inner(s, a=a, b=b):
                root = np.sqrt(np.abs(np.asarray(s, dtype=float)))
                hi_ang = np.arcsin(np.minimum(1.0, b / root)) if np.isfinite(b) else 0.5 * np.pi
                return (2.0 / np.pi) * (hi_ang - np.arcsin(np.minimum(1.0, a / root)))

            total += self.rho.integrate(inner, a**2, np.inf, sign)
        return total

    def density(self, x):
        """Density of ``nu`` at ``x != 0`` (the measure is absolutely continuous)."""
        x = float(x)
        sign, r = (1 if x > 0 else -1), abs(x)
        return self.rho.integrate(
            lambda s: (2.0 / np.pi) / np.sqrt(np.abs(np.asarray(s, dtype=float)) - r * r),
            r * r, np.inf, sign,
        )

    def _make_sampler(self, eps):
        proposal = self.rho.sampler_above(eps * eps)
        mass = self.tail(eps)

        def accept(s, rng):
            r = np.sqrt(np.abs(s)) * np.sin(0.5 * np.pi * rng.random(s.size))
            return np.sign(s) * r, r > eps

        return RejectionSampler(mass, proposal, accept, rate_hint=mass / max(proposal.mass, 1e-300))

    def nodes(self):
        s, ws = self.rho.nodes()
        th, wt = np.polynomial.legendre.leggauss(24)
        th = 0.25 * np.pi * (th + 1.0)
        wt = 0.25 * np.pi * wt * (2.0 / np.pi)
        x = np.sign(s)[:, None] * np.sqrt(np.abs(s))[:, None] * np.sin(th)[None, :]
        return x.ravel(), (ws[:, None] * wt[None, :]).ravel()


# ---------------------------------------------------------------------------
# Triplets and operations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevyTriplet:
    gamma: float
    a: float
    nu: LevyMeasure = field(default_factory=AtomicMeasure)
    name: str = ""
    params: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("Gaussian variance must be nonnegative")


def cumulant_transform(mu: LevyTriplet, z: float) -> complex:
    """Classical cumulant ``C_mu(z)``."""
    z = float(z)
    return 1j * mu.gamma * z - 0.5 * mu.a * z * z + mu.nu.lk_integral(z)


def polar_decompose(nu: LevyMeasure) -> PolarMeasure:
    """Spherical weights on ``{-1, +1}`` and radial measures on ``(0, inf)``."""
    if nu.is_zero:
        raise ZeroMeasureError("polar decomposition of the zero measure")
    if isinstance(nu, PolarMeasure):
        return nu
    weights, radial = {}, {}
    if isinstance(nu, AtomicMeasure):
        for sign in nu.sides():
            sel = np.sign(nu.locs) == sign
            lam = float(nu.masses[sel].sum())
            weights[sign] = lam
            radial[sign] = AtomicMeasure(np.abs(nu.locs[sel]), nu.masses[sel] / lam)
    elif isinstance(nu, DensityMeasure):
        for sign, (rlo, rhi) in nu.support.items():
            lam = (nu.polar_weights or {}).get(sign, 1.0)
            weights[sign] = lam
            radial[sign] = DensityMeasure(
                lambda r, sign=sign, lam=lam: nu.density(sign * np.asarray(r)) / lam,
                {1: (rlo, rhi)},
                nu.breakpoints,
                name=f"{nu.name}[{sign:+d}]",
            )
    else:
        for sign in nu.sides():
            weights[sign] = 1.0
            radial[sign] = SideView(nu, sign)
    return PolarMeasure(weights, radial)


def ilog_check(mu: LevyTriplet, kmax=40, tol=1e-6):
    """Whether ``int_{|x|>2} log|x| nu(dx)`` is finite, and its value.

    Partial integrals over ``(2, 2^k]`` are accumulated; the integral is
    declared convergent when the last dyadic increment is below ``tol``.
    """
    nu = mu.nu if isinstance(mu, LevyTriplet) else mu
    logabs = lambda x: np.log(np.abs(np.asarray(x, dtype=float)))
    if isinstance(nu, AtomicMeasure):
        return True, nu.integrate(logabs, 2.0, np.inf)
    total = 0.0
    for sign in nu.sides():
        inc = 0.0
        for k in range(2, kmax + 1):
            inc = nu.integrate(logabs, 2.0 ** (k - 1), 2.0**k, sign)
            total += inc
        if inc > tol:
            return False, math.inf
        total += nu.integrate(logabs, 2.0**kmax, np.inf, sign)
    return True, total


def sample_jump_above(nu: LevyMeasure, eps: float, rng, size=None):
    """Draw from ``nu`` restricted to ``{|x| > eps}``, normalized."""
    return nu.sampler_above(eps)(rng, size)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


def _gaussian(mean=0.0, var=1.0):
    return LevyTriplet(float(mean), float(var), AtomicMeasure(), "gaussian")


def _poisson(rate=1.0, jump=1.0):
    gamma = rate * jump if abs(jump) <= 1.0 else 0.0
    return LevyTriplet(gamma, 0.0, AtomicMeasure([jump], [rate]), "poisson")


def _gamma(alpha=1.0, beta=1.0):
    nu = DensityMeasure(
        lambda x: alpha * np.exp(-beta * np.asarray(x)) / np.asarray(x),
        {1: (0.0, np.inf)},
        polar_weights={1: alpha},
        name="gamma",
    )
    return LevyTriplet(alpha * (-math.expm1(-beta)) / beta, 0.0, nu, "gamma")


def _cauchy(scale=1.0, loc=0.0):
    c = scale / np.pi
    nu = DensityMeasure(
        lambda x: c / np.asarray(x) ** 2,
        {1: (0.0, np.inf), -1: (0.0, np.inf)},
        polar_weights={1: c, -1: c},
        name="cauchy",
    )
    return LevyTriplet(float(loc), 0.0, nu, "cauchy")


def _sym_stable(alpha=1.5, c=1.0):
    if not 0.0 < alpha < 2.0:
        raise ValueError("stability index must lie in (0, 2)")
    nu = DensityMeasure(
        lambda x: c * np.abs(np.asarray(x)) ** (-1.0 - alpha),
        {1: (0.0, np.inf), -1: (0.0, np.inf)},
        polar_weights={1: c, -1: c},
        name="sym_stable",
    )
    return LevyTriplet(0.0, 0.0, nu, "sym_stable")


def _compound_poisson(rate=1.0, loc=0.0, scale=1.0, drift=0.0):
    """Compound Poisson with normal jumps ``N(loc, scale^2)`` plus ``drift``."""
    pdf = lambda x: rate * np.exp(-0.5 * ((np.asarray(x) - loc) / scale) ** 2) / (scale * math.sqrt(2 * math.pi))
    draw = lambda rng, size: rng.normal(loc, scale, size)
    nu = DensityMeasure(pdf, {1: (0.0, np.inf), -1: (0.0, np.inf)}, breakpoints=(abs(loc),),
                        name="compound_poisson", draw=draw)
    # natural parameterization has no compensator; convert to 1_{|x|<=1}
    gamma = drift + nu.first_moment(0.0, 1.0)
    return LevyTriplet(gamma, 0.0, nu, "compound_poisson")


def _a_class(rho="poisson", gamma=0.0, **rho_params):
    base = rho if isinstance(rho, LevyMeasure) else make_law(rho, **rho_params).nu
    return LevyTriplet(float(gamma), 0.0, AClassMeasure(base), "a_class")


LAWS = {
    "gaussian": (_gaussian, "Gaussian N(mean, var); var=0 gives the point mass at mean"),
    "poisson": (_poisson, "Poisson with intensity rate and jump size jump"),
    "gamma": (_gamma, "Gamma(alpha, beta): nu(dx) = alpha e^{-beta x} x^{-1} dx on (0, inf)"),
    "cauchy": (_cauchy, "Cauchy(loc, scale): nu(dx) = scale/(pi x^2) dx"),
    "sym_stable": (_sym_stable, "symmetric alpha-stable: nu(dx) = c |x|^{-1-alpha} dx"),
    "compound_poisson": (_compound_poisson, "compound Poisson, rate with N(loc, scale^2) jumps, plus drift"),
    "a_class": (_a_class, "A-class law built from rho (catalog key, default poisson) and drift gamma"),
}


def make_law(key: str, **params) -> LevyTriplet:
    """Build a catalog law from its string key and natural parameters."""
    try:
        factory = LAWS[key][0]
    except KeyError:
        raise UnknownNameError(f"unknown law {key!r}; choose from {sorted(LAWS)}") from None
    law = factory(**params)
    return LevyTriplet(law.gamma, law.a, law.nu, law.name, dict(params))
