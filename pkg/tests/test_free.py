import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from freerm.free import (RESIDUAL_TOL, FreeEngine, build_target, cauchy_transform, free_atom, free_cumulant,
                         free_poisson_cauchy, free_poisson_density, mp_cdf, r_transform, semicircle_cauchy,
                         semicircle_cdf, semicircle_density, stieltjes_density, write_density_csv)
from freerm.levy import AtomicMeasure, LevyTriplet, make_law

SEMICIRCLE = make_law("gaussian", mean=0.0, var=1.0)
POISSON = make_law("poisson", rate=1.0)


@pytest.fixture(scope="module")
def semicircle_target():
    return build_target(SEMICIRCLE)


@pytest.fixture(scope="module")
def mp_target():
    return build_target(POISSON)


def test_free_cumulant_examples():
    for z in (0.3 + 0.1j, -0.5j, 0.2 - 0.4j):
        assert abs(free_cumulant(SEMICIRCLE, z) - z * z) < 1e-12
        assert abs(r_transform(SEMICIRCLE, z) - z) < 1e-12
        assert abs(free_cumulant(POISSON, z) - z / (1 - z)) < 1e-9
        assert abs(r_transform(POISSON, z) - 1 / (1 - z)) < 1e-9
    delta = LevyTriplet(2.5, 0.0, AtomicMeasure())
    assert abs(r_transform(delta, 0.3j) - 2.5) < 1e-14


def test_engine_cumulant_matches_quadrature_route():
    mu = make_law("gamma")
    eng = FreeEngine(mu)
    for z in (0.2 + 0.3j, -0.4 - 0.1j, 0.05j):
        assert abs(eng.cumulant(np.array([z]))[0] - free_cumulant(mu, z)) < 1e-7


def test_semicircle_cauchy_at_2i():
    G = cauchy_transform(SEMICIRCLE, 2j)
    assert abs(G - 1j * (1 - math.sqrt(2))) < 1e-10


def test_point_mass_cauchy():
    mu = LevyTriplet(0.7, 0.0, AtomicMeasure())
    for zeta in (1 + 1j, -2 + 0.1j, 0.7 + 1e-3j):
        assert abs(cauchy_transform(mu, zeta) - 1 / (zeta - 0.7)) < 1e-10


@pytest.mark.parametrize("zeta", [0.5 + 0.2j, 3.0 + 1e-3j, -1.0 + 2.0j, 5.0 + 0.01j])
def test_free_poisson_cauchy(zeta):
    assert abs(cauchy_transform(POISSON, zeta) - free_poisson_cauchy(zeta)) < 1e-9


def test_mp_density_at_two():
    eng = FreeEngine(POISSON)
    d, res = stieltjes_density(eng, np.array([2.0]))
    # sqrt(x(4 - x)) / (2 pi x) at x = 2
    assert abs(d[0] - 1 / (2 * math.pi)) < 1e-4
    assert res <= RESIDUAL_TOL


def test_semicircle_density_points():
    eng = FreeEngine(SEMICIRCLE)
    d, _ = stieltjes_density(eng, np.array([0.0, 2.5, -3.0]))
    assert abs(d[0] - 1 / math.pi) < 1e-5
    assert abs(d[1]) < 1e-6 and abs(d[2]) < 1e-6


@given(st.floats(-4, 4), st.floats(0.01, 5), st.sampled_from(["gaussian", "poisson", "gamma", "a_class"]))
def test_reflection_and_half_plane(x, y, name):
    eng = FreeEngine(make_law(name))
    G, _ = eng.solve(np.array([complex(x, y), complex(x, -y)]))
    assert G[0].imag < 0
    assert abs(G[1] - np.conj(G[0])) < 1e-9 * (1 + abs(G[0]))


def test_asymptotic_decay():
    eng = FreeEngine(make_law("gamma"))
    zeta = 1e4j
    G, _ = eng.solve(np.array([zeta]))
    assert abs(G[0] * zeta - 1) < 1e-3


def test_semicircle_target(semicircle_target):
    t = semicircle_target
    x = np.linspace(-2.5, 2.5, 400)
    assert np.abs(t.pdf(x) - semicircle_density(x)).max() <= 1e-3
    assert np.abs(t.cdf(x) - semicircle_cdf(x)).max() <= 1e-4
    assert t.max_residual <= RESIDUAL_TOL
    assert np.all(t.density >= 0)
    assert 0.99 <= t.continuous_mass <= 1.0 + 1e-6


def test_mp_target(mp_target):
    t = mp_target
    x = np.linspace(-1, 5, 400)
    assert np.abs(t.pdf(x) - free_poisson_density(x)).max() <= 1e-3
    assert np.abs(t.cdf(x) - mp_cdf(x)).max() <= 1e-4
    assert t.atoms == ()
    assert t.max_residual <= RESIDUAL_TOL


def test_free_poisson_with_atom():
    mu = make_law("poisson", rate=0.5)
    assert free_atom(mu) == (0.0, 0.5)
    t = build_target(mu)
    assert t.atoms == ((0.0, 0.5),)
    assert abs(t.continuous_mass - 0.5) < 1e-6
    x = np.linspace(0.5, 3.5, 50)
    assert np.abs(t.pdf(x) - free_poisson_density(x, 0.5)).max() < 1e-3


def test_point_mass_target():
    t = build_target(LevyTriplet(1.5, 0.0, AtomicMeasure()))
    assert t.atoms == ((1.5, 1.0),)
    assert t.cdf(1.5) == 1.0 and t.cdf(1.499) == 0.0


@pytest.mark.slow
def test_cauchy_is_its_own_free_image():
    t = build_target(make_law("cauchy"))
    x = np.linspace(-20, 20, 401)
    assert np.abs(t.pdf(x) - 1 / (math.pi * (1 + x * x))).max() < 1e-3
    assert np.abs(t.cdf(x) - (0.5 + np.arctan(x) / math.pi)).max() < 1e-3
    # the tails beyond the bracket are reported, not lost
    assert 0.002 < t.escaped_mass < 0.006


def test_gamma_target_mass():
    t = build_target(make_law("gamma"))
    assert np.all(t.density >= 0)
    assert abs(t.continuous_mass + t.escaped_mass - 1.0) < 1e-3
    assert np.all(np.diff(t.cdf_values) >= 0)


def test_density_csv(tmp_path, semicircle_target):
    p = write_density_csv(tmp_path / "d.csv", semicircle_target)
    rows = open(p).read().splitlines()
    assert rows[0] == "x,density,cdf"
    assert len(rows) == semicircle_target.x.size + 1


def test_semicircle_closed_form_cauchy_matches_density():
    x = np.array([-1.0, 0.3, 1.5])
    G = semicircle_cauchy(x + 1e-9j)
    assert np.allclose(-G.imag / math.pi, semicircle_density(x), atol=1e-6)
