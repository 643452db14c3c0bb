import math

import numpy as np
import pytest

from freerm import ensemble as ens
from freerm import paths
from freerm.errors import IlogViolationError
from freerm.kernels import make_kernel
from freerm.levy import AtomicMeasure, DensityMeasure, LevyTriplet, make_law


def _run(law="gamma", kernel="ou_exp", d=10, **kw):
    spec = ens.MatrixModelSpec(d, make_law(law) if isinstance(law, str) else law, master_seed=kw.pop("seed", 0))
    return paths.IntegralRunSpec(spec, make_kernel(kernel), **kw)


def test_ou_horizon_rule():
    run = _run()
    xbar = paths.jump_quantile(run.spec.mu.nu, run.spec.eps)
    assert run.horizon == max(40.0, math.log(xbar / run.spec.eps))
    assert run.effective_kernel.horizon == run.horizon


def test_bounded_support_keeps_support():
    run = _run(kernel="jurek_t")
    assert run.horizon == 1.0


def test_jump_quantile():
    # Poisson(1) with jump 3: every jump has size 3
    nu = make_law("poisson", rate=1.0, jump=3.0).nu
    assert abs(paths.jump_quantile(nu, 1e-3) - 3.0) < 1e-9
    g = make_law("gamma").nu
    q = paths.jump_quantile(g, 0.01, 0.999)
    assert abs(g.tail(q) / g.tail(0.01) - 1e-3) < 1e-6


def test_ilog_required_for_ou():
    bad = DensityMeasure(lambda x: 1.0 / (np.asarray(x) * np.log(np.asarray(x)) ** 2), {1: (math.e, math.inf)})
    with pytest.raises(IlogViolationError):
        _run(LevyTriplet(0.0, 0.0, bad))


def test_simulated_integral_structure():
    run = _run("poisson", "jurek_t", d=6)
    s = paths.simulate_integral(run, np.random.default_rng(3))
    assert np.allclose(s.matrix, s.matrix.conj().T)
    assert np.allclose(s.reassemble(), s.matrix, atol=1e-12)
    # jump weights are h(tau) = tau on [0, 1]
    assert np.allclose(s.jump_w, s.jump_t)
    assert np.all((s.jump_t >= 0) & (s.jump_t <= 1))
    # positive jumps give a PSD jump part
    assert np.linalg.eigvalsh(s.jump_part).min() >= -1e-10


def test_gaussian_integral_variance():
    # int e^{-t} dW has variance 1/2: the scalar d=1 pathway A draw is N(0, 1/2)
    run = _run("gaussian", "ou_exp", d=1)
    x = np.array([paths.simulate_integral(run, ens.replica_rng(0, r, 5)).matrix[0, 0].real for r in range(4000)])
    assert abs(x.var() - 0.5) < 0.05


def test_pathway_b_spec_uses_integrated_law():
    run = _run("gaussian", "jurek_t")
    b = paths.pathway_b_spec(run)
    assert abs(b.mu.a - 1.0 / 3.0) < 1e-12


def test_determinism_across_workers():
    run = _run("gamma", "ou_exp", d=8)
    a = paths.pathway_a_spectra(run, 6, workers=1)
    b = paths.pathway_a_spectra(run, 6, workers=3)
    assert all(np.array_equal(x.eigenvalues, y.eigenvalues) for x, y in zip(a, b))
    c = paths.pathway_b_spectra(run, 6, workers=1)
    e = paths.pathway_b_spectra(run, 6, workers=2)
    assert all(np.array_equal(x.eigenvalues, y.eigenvalues) for x, y in zip(c, e))


def test_replica_prefix_stability():
    # replica r's draw never depends on how many replicas are requested
    spec = ens.MatrixModelSpec(5, make_law("poisson"), master_seed=4)
    a = paths.direct_model_spectra(spec, 3)
    b = paths.direct_model_spectra(spec, 5)
    assert all(np.array_equal(x.eigenvalues, y.eigenvalues) for x, y in zip(a, b[:3]))


def test_permutation_ks_identical_inputs():
    spec = ens.MatrixModelSpec(5, make_law("gaussian"))
    s = paths.direct_model_spectra(spec, 10)
    rep = paths.replica_permutation_ks(s, s, n_perm=50)
    assert rep.ks == 0.0 and rep.passed


def test_permutation_ks_detects_shift():
    a = paths.direct_model_spectra(ens.MatrixModelSpec(10, make_law("gaussian")), 15)
    b = paths.direct_model_spectra(ens.MatrixModelSpec(10, make_law("gaussian", mean=1.0), master_seed=1), 15)
    rep = paths.replica_permutation_ks(a, b, n_perm=200)
    assert not rep.passed and rep.p_value < 0.01


def test_small_pathway_equivalence():
    run = _run("poisson", "jurek_t", d=20, seed=3)
    rep = paths.pathway_equivalence(run, 30, n_perm=200)
    assert rep.passed


def test_levy_measure_of_integral_unit_atom():
    # delta_1 pushed through e^{-t}: nu_h(dr) = dr / r on (0, 1), so nu_{M_h}{X >= 0, ||X|| in (a, b)} = d log(b/a)
    mu = LevyTriplet(1.0, 0.0, AtomicMeasure([1.0], [1.0]))
    run = _run(mu, "ou_exp", d=3)
    rep = paths.levy_measure_of_integral(run, ens.NormBand(0.2, 0.6, 1), n=50000, rng=np.random.default_rng(1))
    target = 3 * math.log(3.0)
    assert abs(rep.via_integrated_law.value - target) < 4 * rep.via_integrated_law.se
    assert abs(rep.time_unrolled.value - target) < 4 * rep.time_unrolled.se
    assert abs(rep.z) < 4
