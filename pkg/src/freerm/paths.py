"""Matrix stochastic integrals ``int_0^T h(t) dPsi_t`` of the matrix Lévy process.

Pathway A sums jump-time-weighted rank-one jumps of the driving process;
pathway B samples the direct matrix model of the integrated law ``mu_h``.
Both must agree in law, which ``pathway_equivalence`` tests by a
replica-level permutation test on pooled eigenvalues.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import ensemble as ens
from .errors import DegenerateSetError
from .integrated import _require_ilog, integrated_triplet
from .kernels import Kernel
from .levy import LevyMeasure
from .spectra import EmpiricalCDF, SpectralSample, hermitian_eigenvalues, ks_distance

T_MIN = 1e-12


def jump_quantile(nu: LevyMeasure, eps: float, q: float = 0.999) -> float:
    """``q``-quantile of ``|x|`` under ``nu`` restricted to ``|x| > eps``."""
    total = nu.mass_above(eps)
    if total <= 0:
        return eps
    target = (1.0 - q) * total
    lo, hi = math.log(eps), math.log(eps) + 1.0
    while nu.mass_above(math.exp(hi)) > target:
        lo, hi = hi, hi + 2.0 * (hi - lo)
        if hi > 700:
            return math.inf
    for _ in range(60):
        m = 0.5 * (lo + hi)
        if nu.mass_above(math.exp(m)) > target:
            lo = m
        else:
            hi = m
    return math.exp(hi)


@dataclass(frozen=True)
class IntegralRunSpec:
    spec: ens.MatrixModelSpec
    kernel: Kernel
    horizon: float = None
    tol: float = 1e-8

    def __post_init__(self):
        _require_ilog(self.spec.mu, self.kernel)
        if self.horizon is None:
            nu = self.spec.mu.nu
            xbar = jump_quantile(nu, self.spec.eps) if not nu.is_zero else None
            T = self.kernel.tail_rule(self.tol, self.spec.eps, xbar)
            object.__setattr__(self, "horizon", float(T))
        if not np.isfinite(self.horizon) or self.horizon <= 0:
            raise ValueError("integration horizon must be finite and positive")

    @property
    def effective_kernel(self) -> Kernel:
        k = self.kernel
        return k.truncated(self.horizon) if self.horizon < getattr(k, "support", math.inf) else k


def simulate_integral(run: IntegralRunSpec, rng) -> ens.HermitianSample:
    """One draw of ``int_0^T h dPsi`` by weighting driver jumps with ``h(tau_j)``."""
    spec, mu, d = run.spec, run.spec.mu, run.spec.d
    h = run.effective_kernel
    tr = ens.truncation(mu.nu, spec.eps)
    int_h, int_h2 = h.int_h, h.int_h2
    drift = (mu.gamma - tr.compensator) * int_h * np.eye(d, dtype=complex)
    gauss = ens.gaussian_matrix((mu.a + tr.extra_variance(spec.ar_substitute)) * int_h2, d, rng)
    x, U = ens._draw_jumps(tr, run.horizon * d * tr.mass, spec.jump_cap, d, rng)
    tau = rng.uniform(0.0, run.horizon, x.size)
    w = np.asarray(h(tau), dtype=float).reshape(-1)
    J = ens.jump_matrix(w * x, U)
    M = drift + gauss + J
    return ens.HermitianSample(0.5 * (M + M.conj().T), drift, gauss, x, U, tau, w)


def pathway_b_spec(run: IntegralRunSpec) -> ens.MatrixModelSpec:
    mu_h = integrated_triplet(run.spec.mu, run.kernel).as_triplet()
    return replace(run.spec, mu=mu_h)


# ---------------------------------------------------------------------------
# Replica runners
# ---------------------------------------------------------------------------

STREAM_DIRECT, STREAM_A, STREAM_B = 0, 11, 12


def _spectra(draw, n_replicas, master_seed, stream, d, workers, provenance):
    def one(r):
        rng = ens.replica_rng(master_seed, r, stream)
        ev = hermitian_eigenvalues(draw(rng).matrix)
        return SpectralSample(ev, d, r, dict(provenance, seed=ens.replica_seed_words(master_seed, r, stream)))

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, range(n_replicas)))
    return [one(r) for r in range(n_replicas)]


def pathway_a_spectra(run: IntegralRunSpec, n_replicas, master_seed=None, workers=1):
    seed = run.spec.master_seed if master_seed is None else master_seed
    return _spectra(lambda g: simulate_integral(run, g), n_replicas, seed, STREAM_A, run.spec.d, workers, {"pathway": "A"})


def pathway_b_spectra(run: IntegralRunSpec, n_replicas, master_seed=None, workers=1, spec_b=None):
    seed = run.spec.master_seed if master_seed is None else master_seed
    spec_b = spec_b or pathway_b_spec(run)
    return _spectra(lambda g: ens.sample_M_d(spec_b, g), n_replicas, seed, STREAM_B, run.spec.d, workers, {"pathway": "B"})


def direct_model_spectra(spec: ens.MatrixModelSpec, n_replicas=None, master_seed=None, workers=1):
    """Spectra of independent draws of the direct model ``M_d`` (stream 0)."""
    seed = spec.master_seed if master_seed is None else master_seed
    n = spec.replicas if n_replicas is None else n_replicas
    return _spectra(lambda g: ens.sample_M_d(spec, g), n, seed, STREAM_DIRECT, spec.d, workers, {"pathway": "direct"})


@dataclass
class PathwayReport:
    ks: float
    threshold: float
    p_value: float
    n_a: int
    n_b: int

    @property
    def passed(self):
        return self.ks <= self.threshold


def replica_permutation_ks(samples_a, samples_b, level=0.01, n_perm=1000, rng=None) -> PathwayReport:
    """Two-sample KS of pooled eigenvalues with a permutation null over replicas.

    Eigenvalues within one matrix are dependent, so whole replicas are the
    exchangeable units that get relabelled.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    blocks = [s.eigenvalues for s in samples_a] + [s.eigenvalues for s in samples_b]
    na = len(samples_a)

    def stat(idx_a, idx_b):
        A = EmpiricalCDF(np.concatenate([blocks[i] for i in idx_a]))
        B = EmpiricalCDF(np.concatenate([blocks[i] for i in idx_b]))
        return ks_distance(A, B)

    idx = np.arange(len(blocks))
    observed = stat(idx[:na], idx[na:])
    null = np.empty(n_perm)
    for k in range(n_perm):
        p = rng.permutation(idx)
        null[k] = stat(p[:na], p[na:])
    threshold = float(np.quantile(null, 1.0 - level, method="higher"))
    p_value = (1 + np.sum(null >= observed)) / (n_perm + 1)
    return PathwayReport(observed, threshold, float(p_value), na, len(samples_b))


def pathway_equivalence(run: IntegralRunSpec, n_replicas: int, level=0.01, n_perm=1000, workers=1) -> PathwayReport:
    """Permutation-test KS between pathway A and pathway B spectra."""
    a = pathway_a_spectra(run, n_replicas, workers=workers)
    b = pathway_b_spectra(run, n_replicas, workers=workers)
    return replica_permutation_ks(a, b, level, n_perm, np.random.default_rng([run.spec.master_seed, 99]))


# ---------------------------------------------------------------------------
# Lévy measure of the matrix integral
# ---------------------------------------------------------------------------


@dataclass
class IntegralMeasureReport:
    via_integrated_law: ens.MeasureEstimate
    time_unrolled: ens.MeasureEstimate

    @property
    def value(self):
        return self.via_integrated_law.value

    @property
    def z(self):
        diff = self.via_integrated_law.value - self.time_unrolled.value
        return ens._ratio(diff, math.hypot(self.via_integrated_law.se, self.time_unrolled.se))


def time_unrolled_estimate(run: IntegralRunSpec, test_set, n: int, rng) -> ens.MeasureEstimate:
    """``d int omega_d(dV) int nu_mu(dx) int 1_B(h(t) x V) dt`` by sampling ``(t, x, V)``.

    ``t`` is uniform on ``[0, T]``; only ``|x| > r0 / sup h`` can reach ``B``.
    """
    nu, d = run.spec.mu.nu, run.spec.d
    if nu.is_zero:
        return ens.MeasureEstimate(0.0, 0.0, 0)
    h = run.effective_kernel
    hsup = h.sup_value(T_MIN * min(run.horizon, 1.0)) if hasattr(h, "sup_value") else 1.0
    sampler = nu.sampler_above(test_set.min_radius / hsup)
    if sampler.mass <= 0:
        return ens.MeasureEstimate(0.0, 0.0, 0)
    x = sampler(rng, n)
    t = rng.uniform(0.0, run.horizon, n)
    U = ens.sample_unit_vector(d, rng, n)
    hits = test_set.contains(np.asarray(h(t)) * x, U)
    return ens._estimate(d * sampler.mass * run.horizon, hits)


def levy_measure_of_integral(run: IntegralRunSpec, test_set, n: int = 200_000, rng=None) -> IntegralMeasureReport:
    """``nu_{M_h}(B)`` via ``nu_{mu_h}`` and, independently, via the time-unrolled integral."""
    rng = rng if rng is not None else ens.replica_rng(run.spec.master_seed, 0, 21)
    nu = run.spec.mu.nu
    if nu.is_zero:
        zero = ens.MeasureEstimate(0.0, 0.0, 0)
        return IntegralMeasureReport(zero, zero)
    nu_h = integrated_triplet(run.spec.mu, run.kernel).nu_h
    direct = ens.direct_measure_estimate(nu_h, run.spec.d, test_set, n, rng)
    unrolled = time_unrolled_estimate(run, test_set, n, rng)
    if direct.value == 0.0 and unrolled.value == 0.0 and direct.se == 0.0 and unrolled.se == 0.0:
        raise DegenerateSetError(f"both estimates vanish with zero variance on {test_set}")
    return IntegralMeasureReport(direct, unrolled)
