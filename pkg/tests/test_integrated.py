import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from freerm.errors import InadmissibleClassError, IlogViolationError
from freerm.integrated import (a_class_levy, cumulant_of_integral, extract_radial_profile, integrated_drift,
                               integrated_triplet, pushforward_levy, radial_profile_oracle, reassembled_cumulant)
from freerm.kernels import make_kernel
from freerm.levy import AtomicMeasure, DensityMeasure, LevyTriplet, cumulant_transform, make_law

UNIT_ATOM = LevyTriplet(1.0, 0.0, AtomicMeasure([1.0], [1.0]), "poisson")
EXP_JUMPS = LevyTriplet(0.0, 0.0, DensityMeasure(lambda x: np.exp(-np.asarray(x)), {1: (0.0, math.inf)}), "exp")
# finite mass, infinite log-moment
LOG_HEAVY = LevyTriplet(0.0, 0.0, DensityMeasure(lambda x: 1.0 / (np.asarray(x) * np.log(np.asarray(x)) ** 2),
                                                 {1: (math.e, math.inf)}))
CONSTANT = dict(expr="1", support=1.0)


def test_gaussian_ou_cumulant():
    mu = make_law("gaussian")
    for z in (0.5, 1.0, 3.0):
        assert abs(cumulant_of_integral(mu, make_kernel("ou_exp"), z) - (-z * z / 4)) < 1e-10


def test_identity_kernel_returns_driver():
    h = make_kernel("wiener_gamma", **CONSTANT)
    for name in ("gamma", "poisson", "cauchy"):
        mu = make_law(name)
        assert abs(cumulant_of_integral(mu, h, 1.3) - cumulant_transform(mu, 1.3)) < 1e-9
        it = integrated_triplet(mu, h)
        assert abs(it.gamma_h - mu.gamma) < 1e-9
        assert abs(it.nu_h.tail(0.5) - mu.nu.tail(0.5)) < 1e-8


def test_poisson_jurek_cumulant():
    expected = (np.exp(1j) - 1) / 1j - 1
    assert abs(cumulant_of_integral(make_law("poisson"), make_kernel("jurek_t"), 1.0) - expected) < 1e-10


def test_cumulant_at_zero():
    assert cumulant_of_integral(make_law("gamma"), make_kernel("ou_exp"), 0.0) == 0


def test_drift_examples():
    drift_only = LevyTriplet(1.0, 0.0, AtomicMeasure())
    assert abs(integrated_drift(drift_only, make_kernel("jurek_t")) - 0.5) < 1e-14
    assert abs(integrated_drift(drift_only, make_kernel("ou_exp")) - 1.0) < 1e-14
    # Poisson(1) through e^{-t}: all weighted jumps stay in the unit ball, so gamma_h = int h = 1
    assert abs(integrated_drift(UNIT_ATOM, make_kernel("ou_exp")) - 1.0) < 1e-10


def test_gaussian_part_scales_by_int_h2():
    mu = make_law("gaussian", var=3.0)
    for name, m2 in (("ou_exp", 0.5), ("jurek_t", 1 / 3), ("bondesson_log", 2.0)):
        assert abs(integrated_triplet(mu, make_kernel(name)).a_h - 3.0 * m2) < 1e-12


KERNEL_NAMES = ["wiener_gamma", "thorin_gstar", "bondesson_log", "ou_exp", "typeg_fstar", "m_star", "jurek_t",
                "arcsine_cos", "sqrtlog_half", "sqrtlog_one"]
LAW_NAMES = ["gaussian", "poisson", "gamma", "cauchy", "sym_stable", "compound_poisson", "a_class"]
ALL_PAIRS = [(k, law) for k in KERNEL_NAMES for law in LAW_NAMES if law == "a_class" or not k.startswith("sqrtlog")]
# the A-class, Poisson and Gaussian drivers and the time-node kernel take seconds;
# heavy-tailed densities under monotone kernels take up to a minute each
FAST_PAIRS = [p for p in ALL_PAIRS if p[1] in ("gaussian", "poisson", "a_class") or p[0] == "wiener_gamma"]
SLOW_PAIRS = [p for p in ALL_PAIRS if p not in FAST_PAIRS]


def _kernel(name):
    return make_kernel(name, expr="exp(-t)", support=3.0) if name == "wiener_gamma" else make_kernel(name)


def _check_consistency(kernel, law):
    mu, h = make_law(law), _kernel(kernel)
    it = integrated_triplet(mu, h)
    for z in (0.5, 1.0, 2.0):
        direct = np.exp(cumulant_of_integral(mu, h, z))
        assembled = np.exp(reassembled_cumulant(it, z))
        assert abs(direct - assembled) <= 1e-6


@pytest.mark.parametrize("kernel, law", FAST_PAIRS)
def test_triplet_reassembles_cumulant(kernel, law):
    _check_consistency(kernel, law)


@pytest.mark.slow
@pytest.mark.parametrize("kernel, law", SLOW_PAIRS)
def test_triplet_reassembles_cumulant_heavy(kernel, law):
    _check_consistency(kernel, law)


def test_pushforward_of_unit_atom_under_ou():
    nu = pushforward_levy(UNIT_ATOM, make_kernel("ou_exp"))
    for r in (0.1, 0.5, 0.9):
        assert abs(nu.density(r) - 1.0 / r) < 1e-10
    assert nu.density(1.5) == 0.0
    assert abs(nu.mass(0.1, 0.5) - math.log(5.0)) < 1e-10


def test_bondesson_pushforward_is_exponential_mixture():
    # nu_h(dx) = int e^{-s} nu(s^{-1} dx) ds, checked on an interval for Gamma(1,1)
    nu_h = pushforward_levy(make_law("gamma"), make_kernel("bondesson_log"))
    a, b = 0.3, 2.0
    inner = lambda s: integrate.quad(lambda x: math.exp(-x / s) / x, a, b)[0]
    expected = integrate.quad(lambda s: math.exp(-s) * inner(s), 0, np.inf, limit=200)[0]
    assert abs(nu_h.mass(a, b) - expected) < 1e-7


def test_radial_oracle_examples():
    ou = make_kernel("ou_exp")
    assert radial_profile_oracle(5, UNIT_ATOM, 0.5, kernel=ou) == 1.0
    assert radial_profile_oracle(5, UNIT_ATOM, 2.0, kernel=ou) == 0.0
    assert abs(radial_profile_oracle(8, EXP_JUMPS, 1.0) - special.exp1(1.0)) < 1e-10
    assert abs(radial_profile_oracle(2, UNIT_ATOM, 1.0) - math.exp(-1.0)) < 1e-12


def test_radial_oracle_inadmissible():
    with pytest.raises(InadmissibleClassError):
        radial_profile_oracle(3, make_law("gamma"), 1.0)
    with pytest.raises(InadmissibleClassError):
        radial_profile_oracle(1, make_law("poisson"), 1.0, kernel=make_kernel("ou_exp"))
    with pytest.raises(InadmissibleClassError):
        radial_profile_oracle(5, LOG_HEAVY, 1.0)


EXAMPLE_KERNELS = {1: ("wiener_gamma", dict(expr="exp(-t)", support=3.0)), 2: ("thorin_gstar", {}),
                   4: ("bondesson_log", {}), 5: ("ou_exp", {}), 6: ("typeg_fstar", {}), 7: ("m_star", {}),
                   8: ("jurek_t", {})}


@pytest.mark.parametrize("example", sorted(EXAMPLE_KERNELS))
def test_radial_profiles_match_pushforward(example):
    name, params = EXAMPLE_KERNELS[example]
    mu, h = make_law("gamma", alpha=1.0, beta=1.0), make_kernel(name, **params)
    nu_h = pushforward_levy(mu, h)
    for r in np.geomspace(0.05, 5.0, 20):
        oracle = radial_profile_oracle(example, mu, r, kernel=h)
        assert abs(extract_radial_profile(example, nu_h, r) / oracle - 1) <= 1e-5


@given(st.floats(0.01, 10.0), st.floats(0.01, 10.0))
def test_selfdecomposable_k_function_nonincreasing(r1, r2):
    lo, hi = sorted((r1, r2))
    mu = make_law("gamma")
    assert radial_profile_oracle(5, mu, lo) >= radial_profile_oracle(5, mu, hi) - 1e-15


def test_a_class_examples():
    rho = AtomicMeasure([1.0], [1.0])
    assert abs(a_class_levy(rho, (0.0, 1.0)) - 1.0) < 1e-8
    assert a_class_levy(rho, (1.0, math.inf)) == 0.0
    sym = AtomicMeasure([-2.0, 2.0], [0.5, 0.5])
    for a, b in ((0.1, 0.7), (0.3, 1.2)):
        assert abs(a_class_levy(sym, (a, b)) - a_class_levy(sym, (-b, -a))) < 1e-12


def test_ilog_violation():
    bad = LOG_HEAVY
    for name in ("ou_exp", "thorin_gstar", "m_star"):
        with pytest.raises(IlogViolationError):
            integrated_triplet(bad, make_kernel(name))
    # kernels without the log-moment requirement accept it
    integrated_triplet(bad, make_kernel("jurek_t"))
