"""Acceptance criteria, one test per criterion.

Every stochastic check uses master seed 0, fixed in advance.  Each test
prints a single ``[ACCEPT]`` line with its verdict and headline numbers.
"""

import hashlib
import math
import time

import numpy as np
import pytest

from freerm import ensemble as ens
from freerm import paths
from freerm.free import build_target, free_poisson_density, mp_cdf, semicircle_cdf, semicircle_density
from freerm.integrated import a_class_levy, extract_radial_profile, pushforward_levy, radial_profile_oracle
from freerm.kernels import ELEMENTARY_MOMENTS, INVERSE_KERNELS, make_kernel, moment_errors, round_trip_errors
from freerm.levy import LAWS, AtomicMeasure, LevyTriplet, make_law
from freerm.spectra import FunctionCDF, esd, hermitian_eigenvalues, ks_distance

SEED = 0


@pytest.fixture
def announce(capsys):
    def emit(criterion, passed, detail):
        with capsys.disabled():
            print(f"\n[ACCEPT] {criterion}: {'PASS' if passed else 'FAIL'}  {detail}")
    return emit


def test_c1_semicircle(announce):
    t0 = time.perf_counter()
    spec = ens.MatrixModelSpec(200, make_law("gaussian"), replicas=50, master_seed=SEED)
    samples = paths.direct_model_spectra(spec)
    ks = ks_distance(esd(samples), FunctionCDF(semicircle_cdf, (-2.0, 2.0)))
    elapsed = time.perf_counter() - t0
    ok = ks <= 0.05 and elapsed <= 120.0
    announce("C1 semicircle", ok, f"KS={ks:.4f} (<= 0.05), {elapsed:.1f}s (<= 120s)")
    assert ok


def test_c2_marchenko_pastur(announce):
    spec = ens.MatrixModelSpec(200, make_law("poisson"), replicas=50, master_seed=SEED)
    ks = ks_distance(esd(paths.direct_model_spectra(spec)), FunctionCDF(mp_cdf, (0.0, 4.0)))
    announce("C2 Marchenko-Pastur", ks <= 0.07, f"KS={ks:.4f} (<= 0.07)")
    assert ks <= 0.07


PATHWAY_CASES = [("ou_exp", "gamma"), ("jurek_t", "poisson"), ("bondesson_log", "gamma")]


def test_c3_pathway_equivalence(announce):
    rows, ok = [], True
    for kernel, law in PATHWAY_CASES:
        spec = ens.MatrixModelSpec(100, make_law(law), replicas=50, master_seed=SEED)
        rep = paths.pathway_equivalence(paths.IntegralRunSpec(spec, make_kernel(kernel)), 50, level=0.01, n_perm=1000)
        ok &= rep.passed
        rows.append(f"{kernel}+{law} KS={rep.ks:.4f} thr={rep.threshold:.4f} p={rep.p_value:.3f}")
    announce("C3 pathway equivalence", ok, "; ".join(rows))
    assert ok


def test_c4_characteristic_identity(announce):
    worst, failures = 0.0, []
    for law in LAWS:
        eps, ar = ens.characteristic_settings(law)
        for d in (1, 2, 3):
            spec = ens.MatrixModelSpec(d, make_law(law), eps, ar, master_seed=SEED)
            for i, A in enumerate(ens.standard_test_matrices(d)):
                rep = ens.characteristic_check(spec, A, 100_000, ens.replica_rng(SEED, 100 * d + i, 31))
                worst = max(worst, rep.max_abs_z)
                if rep.max_abs_z > 3.0:
                    failures.append(f"{law} d={d} A{i} |z|={rep.max_abs_z:.2f}")
    announce("C4 characteristic identity", not failures,
             f"max |z|={worst:.2f} over {len(LAWS) * 9} cases" + (f"; {failures}" if failures else ""))
    assert not failures


def test_c5_polar_form(announce):
    laws = [make_law("poisson"), make_law("gamma"), make_law("sym_stable", alpha=1.5)]
    worst, failures = 0.0, []
    for mu in laws:
        for d in (2, 5):
            spec = ens.MatrixModelSpec(d, mu, master_seed=SEED)
            for rep in ens.polar_form_check(spec, ens.standard_test_sets(d), ens.replica_rng(SEED, d, 32)):
                worst = max(worst, abs(rep.z))
                if not rep.passed:
                    failures.append(f"{mu.name} d={d} {rep.test_set} z={rep.z:.2f}")
    announce("C5 polar form", not failures, f"max |z|={worst:.2f} over 36 sets" + (f"; {failures}" if failures else ""))
    assert not failures


def test_c6_levy_measure_pushforward(announce):
    mu = LevyTriplet(1.0, 0.0, AtomicMeasure([1.0], [1.0]), "poisson")
    rows, ok = [], True
    for d in (2, 5):
        run = paths.IntegralRunSpec(ens.MatrixModelSpec(d, mu, master_seed=SEED), make_kernel("ou_exp"))
        for a, b in ((0.1, 0.5), (0.5, 0.9)):
            rep = paths.levy_measure_of_integral(run, ens.NormBand(a, b, 1), n=200_000,
                                                 rng=ens.replica_rng(SEED, 10 * d + int(10 * a), 21))
            exact = d * math.log(b / a)
            z1 = (rep.via_integrated_law.value - exact) / rep.via_integrated_law.se
            z2 = (rep.time_unrolled.value - exact) / rep.time_unrolled.se
            ok &= abs(z1) <= 3.0 and abs(z2) <= 3.0
            rows.append(f"d={d} ({a},{b}) z={z1:+.2f}/{z2:+.2f}")
    announce("C6 Levy-measure pushforward", ok, "; ".join(rows))
    assert ok


EXAMPLES = {1: ("wiener_gamma", dict(expr="exp(-t)", support=3.0)), 2: ("thorin_gstar", {}),
            4: ("bondesson_log", {}), 5: ("ou_exp", {}), 6: ("typeg_fstar", {}), 7: ("m_star", {}),
            8: ("jurek_t", {})}


def test_c7_example_oracles(announce):
    mu = make_law("gamma", alpha=1.0, beta=1.0)
    r = np.geomspace(0.05, 5.0, 20)
    worst = {}
    for ex, (name, params) in EXAMPLES.items():
        h = make_kernel(name, **params)
        nu_h = pushforward_levy(mu, h)
        errs = [abs(extract_radial_profile(ex, nu_h, v) / radial_profile_oracle(ex, mu, v, kernel=h) - 1) for v in r]
        worst[ex] = max(errs)
    a_mass = abs(a_class_levy(AtomicMeasure([1.0], [1.0]), (-math.inf, math.inf)) - 1.0)
    ok = max(worst.values()) <= 1e-5 and a_mass <= 1e-8
    detail = ", ".join(f"ex{k}={v:.1e}" for k, v in worst.items())
    announce("C7 example oracles", ok, f"max rel err {detail} (<= 1e-5); A-class mass err={a_mass:.1e} (<= 1e-8)")
    assert ok


def test_c8_kernel_round_trips(announce):
    rt = {name: float(round_trip_errors(name, 100).max()) for name in INVERSE_KERNELS}
    mom = {name: max(moment_errors(name).values()) for name in ELEMENTARY_MOMENTS}
    ok = max(rt.values()) <= 1e-10 and max(mom.values()) <= 1e-12
    announce("C8 kernel round trips", ok,
             f"round trip max={max(rt.values()):.1e} (<= 1e-10); moments max={max(mom.values()):.1e} (<= 1e-12)")
    assert ok


def test_c9_free_engine(announce):
    semi = build_target(make_law("gaussian"))
    mp = build_target(make_law("poisson"))
    err_s = float(np.max(np.abs(semi.density - semicircle_density(semi.x))))
    err_m = float(np.max(np.abs(mp.density - free_poisson_density(mp.x))))
    res = max(semi.max_residual, mp.max_residual)
    ok = err_s <= 1e-3 and err_m <= 1e-3 and res <= 1e-10
    announce("C9 free engine", ok, f"semicircle err={err_s:.1e}, MP err={err_m:.1e} (<= 1e-3); residual={res:.1e} (<= 1e-10)")
    assert ok


def _digest(samples):
    h = hashlib.sha256()
    for s in samples:
        h.update(s.eigenvalues.tobytes())
    return h.hexdigest()


def _invariant_violations(sample, d):
    M = sample.matrix
    scale = max(1.0, float(np.linalg.norm(M)))
    out = []
    if np.linalg.norm(M - M.conj().T) > 1e-12 * scale:
        out.append("hermiticity")
    if np.linalg.norm(sample.reassemble() - M) > 1e-10 * scale:
        out.append("decomposition")
    U, x = sample.jump_u, sample.weighted_jumps
    if x.size and np.max(np.abs(np.linalg.norm(U, axis=0) - 1.0)) > 1e-12:
        out.append("unit vectors")
    for j in range(min(x.size, 5)):
        # one eigenvalue equal to the jump, the rest zero relative to it
        ev = np.linalg.eigvalsh(ens.jump_matrix(x[j:j + 1], U[:, j:j + 1]))
        top = np.argmax(np.abs(ev))
        rest = np.delete(ev, top)
        if abs(ev[top] - x[j]) > 1e-12 * abs(x[j]) or (rest.size and np.abs(rest).max() > 1e-12 * abs(x[j])):
            out.append("rank one")
    for sign in (1, -1):
        sel = np.sign(x) == sign
        if sel.any():
            ev = sign * np.linalg.eigvalsh(ens.jump_matrix(x[sel], U[:, sel]))
            if ev.min() < -1e-10 * max(1.0, float(np.abs(x[sel]).sum())):
                out.append("psd by sign")
    expected = np.trace(sample.drift_part).real + np.trace(sample.gaussian_part).real + x.sum()
    if abs(np.trace(M).real - expected) > 1e-9 * max(1.0, float(np.abs(x).sum()) + abs(expected)):
        out.append("trace")
    hermitian_eigenvalues(M)  # raises on trace/eigenvalue disagreement
    return out


def test_c10_invariants(announce):
    violations, cases = [], 0
    for law in LAWS:
        eps, ar = ens.characteristic_settings(law)
        for d in (1, 4, 12):
            spec = ens.MatrixModelSpec(d, make_law(law), eps, ar, master_seed=SEED)
            for r in range(3):
                cases += 1
                violations += [f"{law} d={d}: {v}" for v in _invariant_violations(ens.sample_M_d(spec, ens.replica_rng(SEED, r, 41)), d)]
            first = _digest(paths.direct_model_spectra(spec, 4))
            if first != _digest(paths.direct_model_spectra(spec, 4)) or first != _digest(paths.direct_model_spectra(spec, 4, workers=3)):
                violations.append(f"{law} d={d}: determinism")
    for kernel, law in PATHWAY_CASES:
        run = paths.IntegralRunSpec(ens.MatrixModelSpec(6, make_law(law), master_seed=SEED), make_kernel(kernel))
        for r in range(3):
            cases += 1
            violations += [f"{kernel}+{law}: {v}" for v in _invariant_violations(paths.simulate_integral(run, ens.replica_rng(SEED, r, 42)), 6)]
        if _digest(paths.pathway_a_spectra(run, 4)) != _digest(paths.pathway_a_spectra(run, 4, workers=3)):
            violations.append(f"{kernel}+{law}: determinism")
    announce("C10 invariants", not violations, f"{len(violations)} violations over {cases} matrices" +
             (f"; {violations[:5]}" if violations else ""))
    assert not violations
