import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from freerm.errors import NonHermitianError
from freerm.spectra import (EmpiricalCDF, FunctionCDF, InterpolatedCDF, SpectralSample, esd, hermitian_eigenvalues,
                            ks_critical, ks_distance, wasserstein1, write_histogram_csv)


def test_diagonal_and_swap():
    assert np.allclose(hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0])), [1, 2, 3])
    assert np.allclose(hermitian_eigenvalues(np.array([[0.0, 1.0], [1.0, 0.0]])), [-1, 1])


def test_rank_one_spectrum(rng):
    u = rng.normal(size=5) + 1j * rng.normal(size=5)
    u /= np.linalg.norm(u)
    ev = hermitian_eigenvalues(2.5 * np.outer(u, u.conj()))
    assert np.allclose(ev, [0, 0, 0, 0, 2.5], atol=1e-10)


def test_non_hermitian_rejected():
    with pytest.raises(NonHermitianError):
        hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NonHermitianError):
        hermitian_eigenvalues(np.ones((2, 3)))


hermitian = hnp.arrays(np.float64, (4, 4, 2), elements=st.floats(-10, 10))


def _herm(a):
    M = a[..., 0] + 1j * a[..., 1]
    return M + M.conj().T


@given(hermitian, st.floats(-5, 5).filter(lambda c: abs(c) > 1e-3))
def test_scale_equivariance_and_trace(a, c):
    M = _herm(a)
    ev = hermitian_eigenvalues(M)
    assert abs(ev.mean() - np.trace(M).real / 4) <= 1e-8 * (1 + np.abs(M).max())
    scaled = hermitian_eigenvalues(c * M)
    assert np.allclose(np.sort(c * ev), scaled, atol=1e-9 * (1 + abs(c) * np.abs(M).max()))


def test_spectral_sample_validation():
    SpectralSample(np.array([0.0, 1.0]), 2)
    with pytest.raises(ValueError):
        SpectralSample(np.array([1.0, 0.0]), 2)
    with pytest.raises(ValueError):
        SpectralSample(np.array([1.0]), 2)


def test_esd_examples():
    F = esd([SpectralSample(np.array([0.0]), 1)])
    assert F(-1e-12) == 0.0 and F(0.0) == 1.0
    G = esd([SpectralSample(np.array([0.0]), 1), SpectralSample(np.array([1.0]), 1)])
    assert G(0.0) == 0.5 and G(0.999) == 0.5 and G(1.0) == 1.0
    with pytest.raises(ValueError):
        esd([])


def test_esd_weights_unequal_dimensions():
    F = esd([SpectralSample(np.array([0.0]), 1), SpectralSample(np.array([1.0, 2.0]), 2)])
    assert F(0.0) == 0.5 and abs(F(1.0) - 0.75) < 1e-15


def test_gamma_identity_model_is_point_mass():
    ev = hermitian_eigenvalues(1.7 * np.eye(6))
    F = esd([SpectralSample(ev, 6)])
    assert F(1.7) == 1.0 and F(1.7 - 1e-9) == 0.0


def test_distance_examples():
    d0 = EmpiricalCDF([0.0])
    d1 = EmpiricalCDF([1.0])
    assert ks_distance(d0, d0) == 0.0
    assert ks_distance(d0, d1) == 1.0
    assert abs(wasserstein1(d0, d1) - 1.0) < 1e-14


def test_uniform_sample_within_critical_value():
    n = 10_000
    x = np.random.default_rng(1).random(n)
    target = FunctionCDF(lambda t: np.clip(t, 0, 1), (0, 1))
    assert ks_critical(n, 0.01) <= 1.63 / math.sqrt(n)
    assert ks_distance(EmpiricalCDF(x), target) <= 1.63 / math.sqrt(n)


def test_ks_sees_left_limits():
    # the largest gap of a step CDF against a continuous one sits just before a jump
    emp = EmpiricalCDF([0.5])
    target = FunctionCDF(lambda t: np.clip(t, 0, 1), (0, 1), n=3)
    assert abs(ks_distance(emp, target) - 0.5) < 1e-12


def test_wasserstein_two_samples():
    a = EmpiricalCDF([0.0, 1.0])
    b = EmpiricalCDF([0.5, 1.5])
    assert abs(wasserstein1(a, b) - 0.5) < 1e-12


def test_interpolated_cdf_with_atom():
    x = np.linspace(-1, 1, 11)
    F = InterpolatedCDF(x, 0.5 * (x + 1) / 2, atoms=[(0.0, 0.5)])
    assert abs(F(0.0) - 0.75) < 1e-12
    assert abs(F.left(0.0) - 0.25) < 1e-12
    assert F(5.0) == 1.0 and F(-5.0) == 0.0


def test_histogram_csv(tmp_path):
    emp = EmpiricalCDF(np.linspace(0, 1, 101))
    p = write_histogram_csv(tmp_path / "h.csv", emp, bins=10)
    rows = open(p).read().splitlines()
    assert rows[0] == "x,count,cdf_empirical,cdf_target,density_target"
    assert len(rows) == 11
    assert sum(int(r.split(",")[1]) for r in rows[1:]) == 101
