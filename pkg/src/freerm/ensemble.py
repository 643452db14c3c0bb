"""The d x d Hermitian matrix model driven by a scalar infinitely divisible law.

``M_d`` has log-Fourier transform ``d E_u C_mu(<u, A u>)`` at a Hermitian
``A``, with ``u`` uniform on the complex unit sphere.  It is realized as

    M = (gamma - int_{eps<|x|<=1} x nu(dx)) I + G + xi I + sum_j x_j u_j u_j^*,

where ``G`` is GUE-type with entry variance ``a/(d+1)``, ``xi ~ N(0, a/(d+1))``,
and the jumps ``x_j u_j u_j^*`` come from a Poisson number (mean
``d nu(|x| > eps)``) of draws of the truncated jump law and independent unit
vectors.  Jumps below ``eps`` are dropped and compensated; optionally a
Gaussian with their variance is added instead (``ar_substitute``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DegenerateSetError, JumpCountError
from .levy import LevyMeasure, LevyTriplet, cumulant_transform, polar_decompose

AR_THRESHOLD = 1e-4
DEFAULT_JUMP_CAP = 1e7


# ---------------------------------------------------------------------------
# Random streams
# ---------------------------------------------------------------------------


def replica_rng(master_seed: int, replica: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for ``(master_seed, stream, replica)``.

    Streams are children of ``SeedSequence(master_seed)`` addressed by the
    spawn key ``(stream, replica)``, so a replica's draws never depend on how
    many replicas or workers there are.
    """
    return np.random.default_rng(np.random.SeedSequence(int(master_seed), spawn_key=(int(stream), int(replica))))


def replica_seed_words(master_seed: int, replica: int, stream: int = 0):
    """First state words of a replica stream, recorded in run manifests."""
    return [int(w) for w in np.random.SeedSequence(int(master_seed), spawn_key=(int(stream), int(replica))).generate_state(2)]


# ---------------------------------------------------------------------------
# Model specification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixModelSpec:
    d: int
    mu: LevyTriplet
    eps: float = 1e-3
    ar_substitute: bool = False
    replicas: int = 1
    master_seed: int = 0
    jump_cap: float = DEFAULT_JUMP_CAP

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if not self.eps > 0:
            raise ValueError("jump cutoff must be positive")
        if self.replicas < 1:
            raise ValueError("need at least one replica")


@dataclass(frozen=True)
class Truncation:
    """Quantities of the jump law at a cutoff ``eps`` (0 when every jump is kept)."""

    eps: float
    mass: float            # nu(|x| > eps)
    compensator: float     # int_{eps < |x| <= 1} x nu(dx)
    small_variance: float  # int_{|x| <= eps} x^2 nu(dx)
    sampler: object

    def extra_variance(self, ar_substitute):
        return self.small_variance if (ar_substitute and self.small_variance > AR_THRESHOLD) else 0.0


_TRUNC_CACHE = {}


def truncation(nu: LevyMeasure, eps: float) -> Truncation:
    """Cutoff data; finite-activity measures keep every jump (effective cutoff 0)."""
    if nu.finite_activity:
        eps = 0.0
    key = (id(nu), float(eps))
    hit = _TRUNC_CACHE.get(key)
    if hit is not None and hit[0] is nu:
        return hit[1]
    if nu.is_zero:
        t = Truncation(eps, 0.0, 0.0, 0.0, None)
    else:
        mass = nu.mass_above(eps)
        comp = nu.first_moment(eps, 1.0) if eps < 1.0 else 0.0
        small = nu.second_moment(0.0, eps) if eps > 0 else 0.0
        t = Truncation(eps, mass, comp, small, nu.sampler_above(eps) if mass > 0 else None)
    _TRUNC_CACHE[key] = (nu, t)
    return t


@dataclass(frozen=True)
class RankOneJump:
    x: float
    u: np.ndarray
    t: float = 0.0

    @property
    def matrix(self):
        return self.x * np.outer(self.u, self.u.conj())


@dataclass
class HermitianSample:
    """One matrix with its audit trail.

    ``jump_x``, ``jump_u`` (columns), ``jump_t`` store the jump ledger; the
    effective jump matrix is ``sum_j w_j x_j u_j u_j^*`` with ``w_j``
    ``jump_w`` (kernel weights ``h(t_j)``, all ones for the direct model).
    """

    matrix: np.ndarray
    drift_part: np.ndarray
    gaussian_part: np.ndarray
    jump_x: np.ndarray
    jump_u: np.ndarray
    jump_t: np.ndarray = None
    jump_w: np.ndarray = None

    @property
    def jumps(self):
        t = self.jump_t if self.jump_t is not None else np.zeros(self.jump_x.size)
        return [RankOneJump(float(x), self.jump_u[:, j], float(t[j])) for j, x in enumerate(self.jump_x)]

    @property
    def weighted_jumps(self):
        w = self.jump_w if self.jump_w is not None else np.ones(self.jump_x.size)
        return w * self.jump_x

    @property
    def jump_part(self):
        return jump_matrix(self.weighted_jumps, self.jump_u)

    def reassemble(self):
        return self.drift_part + self.gaussian_part + self.jump_part


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------


def sample_unit_vector(d: int, rng, n: int = None) -> np.ndarray:
    """Uniform vector(s) on the unit sphere of C^d; ``n`` columns when given."""
    shape = (d,) if n is None else (d, n)
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=0)


def drift_matrix(mu: LevyTriplet, d: int) -> np.ndarray:
    return mu.gamma * np.eye(d, dtype=complex)


def gaussian_matrix(a: float, d: int, rng) -> np.ndarray:
    """``G + xi I`` with ``G`` GUE-type (``E|G_ij|^2 = a/(d+1)``) and ``xi ~ N(0, a/(d+1))``.

    Then ``Var tr(M A) = a ((tr A)^2 + tr A^2) / (d+1)`` for Hermitian ``A``.
    """
    s2 = a / (d + 1.0)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    xi = rng.standard_normal()
    if a == 0.0:
        return np.zeros((d, d), dtype=complex)
    G = math.sqrt(s2) * (g + g.conj().T) / 2.0
    return G + math.sqrt(s2) * xi * np.eye(d)


def jump_matrix(x: np.ndarray, U: np.ndarray) -> np.ndarray:
    """``sum_j x_j u_j u_j^*`` for unit columns ``u_j`` of ``U``."""
    d = U.shape[0]
    if x.size == 0:
        return np.zeros((d, d), dtype=complex)
    J = (U * x) @ U.conj().T
    return 0.5 * (J + J.conj().T)


def expected_jumps(spec: MatrixModelSpec, horizon: float = 1.0) -> float:
    return horizon * spec.d * truncation(spec.mu.nu, spec.eps).mass


def _draw_jumps(tr: Truncation, mean_count, cap, d, rng):
    if mean_count > cap:
        raise JumpCountError(f"expected jump count {mean_count:.3g} exceeds the cap {cap:.3g}")
    n = int(rng.poisson(mean_count)) if mean_count > 0 else 0
    x = tr.sampler(rng, n) if n else np.zeros(0)
    U = sample_unit_vector(d, rng, n)
    return x, U


def sample_M_d(spec: MatrixModelSpec, rng) -> HermitianSample:
    """One draw of the direct matrix model."""
    mu, d = spec.mu, spec.d
    tr = truncation(mu.nu, spec.eps)
    drift = (mu.gamma - tr.compensator) * np.eye(d, dtype=complex)
    gauss = gaussian_matrix(mu.a + tr.extra_variance(spec.ar_substitute), d, rng)
    x, U = _draw_jumps(tr, d * tr.mass, spec.jump_cap, d, rng)
    J = jump_matrix(x, U)
    M = drift + gauss + J
    return HermitianSample(0.5 * (M + M.conj().T), drift, gauss, x, U)


def sample_many(spec: MatrixModelSpec, n: int, rng, chunk: int = 20000) -> np.ndarray:
    """``n`` independent draws of ``M_d`` as an ``(n, d, d)`` array (vectorized; small ``d``)."""
    mu, d = spec.mu, spec.d
    tr = truncation(mu.nu, spec.eps)
    a_eff = mu.a + tr.extra_variance(spec.ar_substitute)
    s = math.sqrt(a_eff / (d + 1.0))
    out = np.empty((n, d, d), dtype=complex)
    for start in range(0, n, chunk):
        m = min(chunk, n - start)
        g = rng.standard_normal((m, d, d)) + 1j * rng.standard_normal((m, d, d))
        xi = rng.standard_normal(m)
        M = s * 0.5 * (g + np.conj(np.swapaxes(g, 1, 2)))
        M += ((mu.gamma - tr.compensator) + s * xi)[:, None, None] * np.eye(d)
        if tr.mass > 0:
            if d * tr.mass > spec.jump_cap:
                raise JumpCountError(f"expected jump count {d * tr.mass:.3g} exceeds the cap")
            counts = rng.poisson(d * tr.mass, size=m)
            total = int(counts.sum())
            x = tr.sampler(rng, total) if total else np.zeros(0)
            U = sample_unit_vector(d, rng, total)
            owner = np.repeat(np.arange(m), counts)
            outer = (U[:, None, :] * U.conj()[None, :, :]) * x
            for i in range(d):
                for j in range(d):
                    M[:, i, j] += np.bincount(owner, weights=outer[i, j].real, minlength=m)
                    M[:, i, j] += 1j * np.bincount(owner, weights=outer[i, j].imag, minlength=m)
        out[start:start + m] = M
    return out


# ---------------------------------------------------------------------------
# Characteristic function check
# ---------------------------------------------------------------------------


class CumulantTable:
    """``C_mu`` on ``[-qmax, qmax]`` by a cubic spline through quadrature values.

    Nodes are uniform plus geometric near 0 (where ``C_mu`` may behave like
    ``|z|^alpha``); negative arguments use ``C(-z) = conj C(z)``.
    """

    def __init__(self, mu: LevyTriplet, qmax: float, n_uniform=129, n_geometric=64):
        nodes = np.union1d(np.linspace(0.0, qmax, n_uniform), qmax * np.geomspace(1e-5, 1.0, n_geometric))
        vals = np.array([cumulant_transform(mu, z) for z in nodes])
        self.qmax = qmax
        self._re = CubicSpline(nodes, vals.real)
        self._im = CubicSpline(nodes, vals.imag)

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        a = np.abs(q)
        if np.any(a > self.qmax * (1 + 1e-12)):
            raise ValueError("argument outside the tabulated range")
        return self._re(a) + 1j * np.sign(q) * self._im(a)


@dataclass
class CharacteristicReport:
    empirical: complex
    empirical_se: tuple
    formula: complex
    formula_se: tuple
    z: tuple

    @property
    def max_abs_z(self):
        return max(abs(self.z[0]), abs(self.z[1]))


def _ratio(num, den):
    return 0.0 if num == 0.0 else (num / den if den > 0 else math.inf)


def characteristic_check(spec: MatrixModelSpec, A: np.ndarray, n_samples: int, rng,
                         n_unit: int = 100_000, table: CumulantTable = None) -> CharacteristicReport:
    """Compare ``E exp(i tr(M A))`` with ``exp(d E_u C_mu(<u, A u>))``.

    The left side averages ``n_samples`` model draws; ``E_u`` on the right is
    a Monte Carlo mean over ``n_unit`` unit vectors (exact for ``d = 1``).
    Standard errors of both sides are combined into componentwise z-scores.
    """
    A = np.asarray(A, dtype=complex)
    d = spec.d
    if np.allclose(A, 0):
        return CharacteristicReport(1 + 0j, (0.0, 0.0), 1 + 0j, (0.0, 0.0), (0.0, 0.0))
    M = sample_many(spec, n_samples, rng)
    phase = np.exp(1j * np.einsum("nij,ji->n", M, A).real)
    emp = phase.mean()
    emp_se = (phase.real.std(ddof=1) / math.sqrt(n_samples), phase.imag.std(ddof=1) / math.sqrt(n_samples))

    if d == 1:
        C = cumulant_transform(spec.mu, float(A[0, 0].real))
        form, form_se = np.exp(C), (0.0, 0.0)
    else:
        U = sample_unit_vector(d, rng, n_unit)
        q = np.einsum("in,ij,jn->n", U.conj(), A, U).real
        tab = table or CumulantTable(spec.mu, float(np.abs(np.linalg.eigvalsh(A)).max()))
        Cq = tab(q)
        m = d * Cq.mean()
        form = np.exp(m)
        # delta method: fluctuation of exp(m) is exp(m) * d * (C(q) - E C)
        lin = form * d * Cq
        form_se = (lin.real.std(ddof=1) / math.sqrt(n_unit), lin.imag.std(ddof=1) / math.sqrt(n_unit))
    z = (
        _ratio(emp.real - form.real, math.hypot(emp_se[0], form_se[0])),
        _ratio(emp.imag - form.imag, math.hypot(emp_se[1], form_se[1])),
    )
    return CharacteristicReport(complex(emp), emp_se, complex(form), form_se, z)


# ---------------------------------------------------------------------------
# Lévy measure of M_d on test sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormBand:
    """``{X : ||X|| in (r1, r2)}``, restricted to ``X >= 0`` / ``X <= 0`` by ``sign``."""

    r1: float
    r2: float
    sign: int = None

    @property
    def min_radius(self):
        return self.r1

    def contains(self, x, U):
        ax = np.abs(x)
        inside = (ax > self.r1) & (ax < self.r2)
        if self.sign is not None:
            inside &= np.sign(x) == self.sign
        return inside

    def negated(self):
        return NormBand(self.r1, self.r2, None if self.sign is None else -self.sign)


@dataclass(frozen=True)
class TraceBand:
    """``{X : tr(X A0) in (c1, c2)}`` for a Hermitian ``A0``; ``(c1, c2)`` must avoid 0."""

    A0: tuple
    c1: float
    c2: float

    @property
    def matrix(self):
        return np.asarray(self.A0, dtype=complex)

    @property
    def min_radius(self):
        if self.c1 < 0.0 < self.c2 or self.c1 == 0.0 or self.c2 == 0.0:
            raise DegenerateSetError("trace band is not bounded away from the origin")
        op = float(np.abs(np.linalg.eigvalsh(self.matrix)).max())
        return min(abs(self.c1), abs(self.c2)) / op

    def contains(self, x, U):
        q = np.einsum("in,ij,jn->n", U.conj(), self.matrix, U).real
        v = x * q
        return (v > self.c1) & (v < self.c2)

    def negated(self):
        return TraceBand(self.A0, -self.c2, -self.c1)


def diag_matrix(*entries):
    return tuple(tuple(float(v) if i == j else 0.0 for j in range(len(entries))) for i, v in enumerate(entries))


def standard_test_sets(d: int):
    """The six sets used by the polar-form and pushforward checks."""
    A0 = diag_matrix(1.0, -1.0, *([0.0] * (d - 2)))
    A1 = diag_matrix(1.0, 0.5, *([0.0] * (d - 2)))
    return (
        NormBand(0.5, 1.5, 1),
        TraceBand(diag_matrix(*([1.0] * d)), 0.5, 2.0),
        TraceBand(A0, 0.1, 0.6),
        TraceBand(A0, -0.6, -0.1),
        TraceBand(A1, 0.2, 0.9),
        NormBand(0.8, 3.0, None),
    )


@dataclass
class MeasureEstimate:
    value: float
    se: float
    n: int


def _estimate(weight, hits):
    n = hits.size
    p = hits.mean() if n else 0.0
    se = weight * math.sqrt(p * (1 - p) / max(n - 1, 1)) if n else 0.0
    return MeasureEstimate(weight * p, se, n)


def direct_measure_estimate(nu: LevyMeasure, d: int, test_set, n: int, rng) -> MeasureEstimate:
    """``d int omega_d(dV) int nu(dx) 1_B(x V)`` by drawing ``(x, u)`` jointly."""
    if nu.is_zero:
        return MeasureEstimate(0.0, 0.0, 0)
    r0 = test_set.min_radius
    sampler = nu.sampler_above(r0)
    if sampler.mass <= 0.0:
        return MeasureEstimate(0.0, 0.0, 0)
    x = sampler(rng, n)
    U = sample_unit_vector(d, rng, n)
    return _estimate(d * sampler.mass, test_set.contains(x, U))


def polar_measure_estimate(nu: LevyMeasure, d: int, test_set, n: int, rng) -> MeasureEstimate:
    """Same quantity through the polar form: ``xi`` from ``lambda``, ``r`` from ``nu_xi``, ``V`` from ``omega_d``."""
    if nu.is_zero:
        return MeasureEstimate(0.0, 0.0, 0)
    polar = polar_decompose(nu)
    r0 = test_set.min_radius
    parts = []
    for sign in polar.sides():
        s = polar.radial[sign].sampler_above(r0)
        if s.mass > 0:
            parts.append((sign, polar.weights[sign] * s.mass, s))
    if not parts:
        return MeasureEstimate(0.0, 0.0, 0)
    total = sum(p[1] for p in parts)
    probs = np.array([p[1] for p in parts]) / total
    which = rng.choice(len(parts), size=n, p=probs)
    x = np.empty(n)
    for k, (sign, _, s) in enumerate(parts):
        sel = which == k
        x[sel] = sign * s(rng, int(sel.sum()))
    U = sample_unit_vector(d, rng, n)
    return _estimate(d * total, test_set.contains(x, U))


@dataclass
class PolarReport:
    test_set: object
    direct: MeasureEstimate
    polar: MeasureEstimate

    @property
    def z(self):
        diff = self.direct.value - self.polar.value
        se = math.hypot(self.direct.se, self.polar.se)
        return _ratio(diff, se)

    @property
    def passed(self):
        return abs(self.z) <= 3.0


def polar_form_check(spec: MatrixModelSpec, test_sets, rng, n: int = 200_000):
    """Estimate ``nu_{M_d}(B)`` directly and through the polar form, for each set."""
    reports = []
    for B in test_sets:
        direct = direct_measure_estimate(spec.mu.nu, spec.d, B, n, rng)
        polar = polar_measure_estimate(spec.mu.nu, spec.d, B, n, rng)
        if (not spec.mu.nu.is_zero and direct.value == 0.0 and polar.value == 0.0
                and direct.se == 0.0 and polar.se == 0.0):
            raise DegenerateSetError(f"both estimates vanish with zero variance on {B}")
        reports.append(PolarReport(B, direct, polar))
    return reports


def standard_test_matrices(d: int):
    """Three fixed Hermitian ``A`` for the characteristic-function check.

    A multiple of the identity, a signed diagonal, and a seeded full
    Hermitian matrix scaled to spectral norm 1.
    """
    signs = np.where(np.arange(d) % 2 == 0, 1.0, -0.5)
    rng = np.random.default_rng(np.random.SeedSequence(20, spawn_key=(d,)))
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    H = 0.5 * (X + X.conj().T)
    H /= np.abs(np.linalg.eigvalsh(H)).max()
    return [0.7 * np.eye(d, dtype=complex), np.diag(signs).astype(complex), H]


# Heavy-tailed laws need a larger cutoff plus the Gaussian substitute, or the
# jump count per matrix explodes; everything else uses the plain 1e-3 cutoff.
CHARACTERISTIC_SETTINGS = {"sym_stable": (0.1, True), "cauchy": (0.05, True)}


def characteristic_settings(law_name: str):
    """``(eps, ar_substitute)`` used by the characteristic check for a catalog law."""
    return CHARACTERISTIC_SETTINGS.get(law_name, (1e-3, False))
