"""Eigenvalues, empirical spectral distributions and distances to target laws."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import EigenConvergenceError, NonHermitianError

HERMITIAN_TOL = 1e-10
RESIDUAL_TOL = 1e-8


def hermitian_eigenvalues(M, check_indices=3) -> np.ndarray:
    """Sorted eigenvalues of a Hermitian matrix, with residual and trace checks.

    Residuals ``||M v - lambda v||`` are spot-checked on ``check_indices``
    evenly spaced eigenpairs.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NonHermitianError("matrix must be square")
    scale = float(np.linalg.norm(M)) if M.size else 0.0
    if np.linalg.norm(M - M.conj().T) > HERMITIAN_TOL * max(scale, 1e-300):
        raise NonHermitianError("matrix is not Hermitian within tolerance")
    H = 0.5 * (M + M.conj().T)
    try:
        w, v = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(str(exc)) from None
    d = w.size
    if d and check_indices:
        for i in np.unique(np.linspace(0, d - 1, check_indices).round().astype(int)):
            res = np.linalg.norm(H @ v[:, i] - w[i] * v[:, i])
            if res > RESIDUAL_TOL * max(scale, 1e-300):
                raise EigenConvergenceError(f"eigenpair {i} residual {res:.3g} too large")
    tr = float(np.trace(H).real)
    # roundoff floor for heavy-tailed matrices whose trace cancels
    floor = 64 * np.finfo(float).eps * d * scale
    if abs(w.sum() - tr) > max(1e-8 * (1.0 + abs(tr)), floor):
        raise EigenConvergenceError("eigenvalue sum disagrees with the trace")
    return np.sort(w)


@dataclass(frozen=True)
class SpectralSample:
    eigenvalues: np.ndarray
    d: int
    replica_id: int = 0
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if ev.size != self.d:
            raise ValueError("eigenvalue count must equal the dimension")
        if np.any(np.diff(ev) < 0):
            raise ValueError("eigenvalues must be sorted")
        object.__setattr__(self, "eigenvalues", ev)


# ---------------------------------------------------------------------------
# Distribution functions
# ---------------------------------------------------------------------------


class EmpiricalCDF:
    """Right-continuous weighted step CDF."""

    def __init__(self, values, weights=None):
        values = np.asarray(values, dtype=float).ravel()
        if values.size == 0:
            raise ValueError("empty sample")
        order = np.argsort(values, kind="stable")
        w = np.full(values.size, 1.0 / values.size) if weights is None else np.asarray(weights, float).ravel()[order]
        x = values[order]
        self.jumps, idx = np.unique(x, return_index=True)
        self.heights = np.add.reduceat(w, idx)
        self._cum = np.concatenate([[0.0], np.cumsum(self.heights)])
        self._cum /= self._cum[-1]
        self.values = x

    def __call__(self, x):
        return self._cum[np.searchsorted(self.jumps, x, side="right")]

    def left(self, x):
        return self._cum[np.searchsorted(self.jumps, x, side="left")]

    @property
    def nodes(self):
        return self.jumps

    def mean(self):
        return float(np.dot(self.jumps, self.heights) / self.heights.sum())


class InterpolatedCDF:
    """Continuous CDF from monotone interpolation of ``(x, F)``, plus optional atoms."""

    def __init__(self, x, F, atoms=()):
        x = np.asarray(x, float)
        F = np.maximum.accumulate(np.clip(np.asarray(F, float), 0.0, 1.0))
        self.x, self.F = x, F
        self._interp = PchipInterpolator(x, F, extrapolate=False)
        self.atoms = tuple((float(a), float(m)) for a, m in atoms)

    def _continuous(self, x):
        x = np.asarray(x, float)
        out = self._interp(np.clip(x, self.x[0], self.x[-1]))
        out = np.where(x < self.x[0], self.F[0], out)
        return np.where(x > self.x[-1], self.F[-1], out)

    def _atom_mass(self, x, strict):
        x = np.asarray(x, float)
        total = np.zeros_like(x)
        for a, m in self.atoms:
            total = total + m * ((x > a) if strict else (x >= a))
        return total

    def __call__(self, x):
        return np.clip(self._continuous(x) + self._atom_mass(x, False), 0.0, 1.0)

    def left(self, x):
        return np.clip(self._continuous(x) + self._atom_mass(x, True), 0.0, 1.0)

    @property
    def nodes(self):
        return np.union1d(self.x, [a for a, _ in self.atoms])


class FunctionCDF:
    """Wrap a continuous closed-form CDF; ``support`` gives evaluation nodes."""

    def __init__(self, fn, support, n=2001):
        self.fn = fn
        self._nodes = np.linspace(support[0], support[1], n)

    def __call__(self, x):
        return self.fn(np.asarray(x, float))

    left = __call__

    @property
    def nodes(self):
        return self._nodes


def esd(samples) -> EmpiricalCDF:
    """Pooled ESD: each eigenvalue carries weight ``1/(d * replicas)``."""
    samples = list(samples)
    if not samples:
        raise ValueError("no spectral samples")
    vals = np.concatenate([s.eigenvalues for s in samples])
    w = np.concatenate([np.full(s.d, 1.0 / (s.d * len(samples))) for s in samples])
    return EmpiricalCDF(vals, w)


def _left(F, x):
    return F.left(x) if hasattr(F, "left") else F(x)


def _nodes(F):
    return getattr(F, "nodes", np.zeros(0))


def ks_distance(emp, target) -> float:
    """Sup-norm distance, evaluated at both one-sided limits of every jump point."""
    pts = np.union1d(_nodes(emp), _nodes(target))
    right = np.abs(emp(pts) - target(pts))
    left = np.abs(_left(emp, pts) - _left(target, pts))
    return float(min(1.0, max(right.max(), left.max())))


def wasserstein1(emp, target, refine=4) -> float:
    """``int |F_emp - F_target| dx`` by the trapezoid rule between jump points.

    Each interval between consecutive nodes is split into ``refine`` pieces;
    the empirical CDF is constant inside, and the right endpoint uses left limits.
    """
    pts = np.union1d(_nodes(emp), _nodes(target))
    if pts.size < 2:
        return 0.0
    t = np.linspace(0.0, 1.0, refine + 1)
    a, b = pts[:-1], pts[1:]
    total = 0.0
    Fe = emp(a)
    for k in range(refine):
        lo = a + (b - a) * t[k]
        hi = a + (b - a) * t[k + 1]
        f_lo = target(lo) if k else target(a)
        f_hi = _left(target, hi) if k == refine - 1 else target(hi)
        total += float(np.sum(0.5 * (np.abs(Fe - f_lo) + np.abs(Fe - f_hi)) * (hi - lo)))
    return total


def write_histogram_csv(path, emp: EmpiricalCDF, target=None, density=None, bins=100):
    """Columns ``x, count, cdf_empirical, cdf_target, density_target`` at bin centres."""
    lo, hi = emp.jumps[0], emp.jumps[-1]
    if hi == lo:
        hi = lo + 1.0
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(emp.values, edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    ft = target(mids) if target is not None else np.full(bins, np.nan)
    dt = density(mids) if density is not None else np.full(bins, np.nan)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "count", "cdf_empirical", "cdf_target", "density_target"])
        for row in zip(mids, counts, emp(mids), ft, dt):
            w.writerow([f"{row[0]:.17g}", int(row[1]), f"{row[2]:.17g}", f"{row[3]:.17g}", f"{row[4]:.17g}"])
    return path


def ks_critical(n, level=0.01):
    """Asymptotic one-sample Kolmogorov critical value ``c(level)/sqrt(n)``."""
    c = math.sqrt(-0.5 * math.log(level / 2.0))
    return c / math.sqrt(n)
