import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwalk2c.limit_laws import limit_density, limit_moment
from qwalk2c.quadrature import QuadratureSpec
from qwalk2c.spectral import (
    branch_weights,
    closed_form_eigenvalues,
    eigen_system,
    flat_band_amplitude,
    group_velocity,
    half_step_operator,
    initial_overlap,
    inverse_fourier_amplitude,
    inverse_fourier_wavefunction,
    momentum_operator,
    spectral_moment,
)
from qwalk2c.verify import eigen_identity_error
from qwalk2c.walk_engine import (
    CoinParameters,
    InitialCoinState,
    evolve,
    normalized_moment,
    position_distribution,
)

from conftest import betas, coin_states, random_draws

wavenumbers = st.floats(min_value=0.0, max_value=2 * math.pi, exclude_max=True)


def test_factorization_100_random_k():
    rng = np.random.default_rng(11)
    for _ in range(100):
        coin = CoinParameters(rng.uniform(0.05, 1.5))
        m = momentum_operator(rng.uniform(0, 2 * math.pi), coin)
        assert np.max(np.abs(m.u_ec - np.kron(m.u_half, m.u_half))) < 1e-12
        assert np.max(np.abs(m.u_ec.conj().T @ m.u_ec - np.eye(4))) < 1e-12
        assert np.max(np.abs(m.u_half.conj().T @ m.u_half - np.eye(2))) < 1e-12


def test_closed_form_eigenvalues_100_random_k():
    rng = np.random.default_rng(12)
    for _ in range(100):
        beta, k = rng.uniform(0.05, 1.5), rng.uniform(0, 2 * math.pi)
        numeric = np.sort_complex(np.linalg.eigvals(half_step_operator(k, CoinParameters(beta))))
        closed = np.sort_complex(closed_form_eigenvalues(k, beta))
        assert np.max(np.abs(numeric - closed)) < 1e-10


def test_k0_values(coin_pi4):
    es = eigen_system(0.0, coin_pi4)
    np.testing.assert_allclose(es.lambdas, [1.0, -1.0], atol=1e-15)
    assert es.group_velocities[0] == pytest.approx(math.sqrt(2) / 2, abs=1e-15)


@given(betas)
def test_k_pi_values(beta):
    es = eigen_system(math.pi, CoinParameters(beta))
    assert es.lambdas[0] == pytest.approx(complex(math.sin(beta), math.cos(beta)), abs=1e-15)
    assert abs(es.group_velocities[0]) < 1e-15


@given(betas, wavenumbers)
def test_unit_modulus_and_tensor_eigenvalues(beta, k):
    es = eigen_system(k, CoinParameters(beta))
    assert np.max(np.abs(np.abs(es.lambdas) - 1)) < 1e-12
    l1, l2 = es.lambdas
    np.testing.assert_allclose(es.Lambdas, [l1 * l1, -1, -1, l2 * l2], atol=1e-10)
    u = momentum_operator(k, CoinParameters(beta)).u_ec
    for j in range(4):
        assert np.max(np.abs(u @ es.Vs[:, j] - es.Lambdas[j] * es.Vs[:, j])) < 1e-10


@given(betas, wavenumbers)
def test_velocity_symmetry(beta, k):
    h = eigen_system(k, CoinParameters(beta)).group_velocities
    assert h[1] == 0.0 and h[2] == 0.0
    assert abs(h[0] + h[3]) < 1e-10


@pytest.mark.parametrize("beta", [0.2, math.pi / 4, 1.3])
def test_group_velocity_finite_difference(beta):
    # Λ1 = λ1², so h(k,1) = d/dk arg Λ1(k).
    step = 1e-5
    ks = np.linspace(0.01, 2 * math.pi - 0.01, 200)
    arg = lambda k: np.unwrap(2 * np.angle(closed_form_eigenvalues(k, beta)[..., 0]))
    fd = (arg(ks + step) - arg(ks - step)) / (2 * step)
    assert np.max(np.abs(fd - group_velocity(ks, beta))) < 1e-6


@settings(max_examples=50)
@given(betas, st.lists(wavenumbers, min_size=4, max_size=4))
def test_eigenvector_identities(beta, ks):
    assert eigen_identity_error(CoinParameters(beta), np.array(ks)) < 1e-8


def test_eigenvector_identities_near_endpoints():
    for beta in (0.02, 1.55):
        assert eigen_identity_error(CoinParameters(beta), np.linspace(0, 2 * math.pi, 64, endpoint=False)) < 1e-8


def test_rejects_k_outside_interval(coin_pi4, bell):
    for k in (-0.1, 2 * math.pi, 7.0):
        with pytest.raises(ValueError):
            eigen_system(k, coin_pi4)
        with pytest.raises(ValueError):
            initial_overlap(k, 1, coin_pi4, bell)
    with pytest.raises(ValueError):
        initial_overlap(1.0, 5, coin_pi4, bell)


class TestOverlaps:
    @settings(max_examples=30)
    @given(betas, coin_states(), st.lists(wavenumbers, min_size=1, max_size=5))
    def test_weights_sum_to_one(self, beta, init, ks):
        w = branch_weights(ks, CoinParameters(beta), init)
        assert np.max(np.abs(w.sum(axis=1) - 1)) < 1e-10

    def test_eigenvector_as_initial_state(self):
        coin = CoinParameters(0.7)
        k0 = 1.234
        v1 = eigen_system(k0, coin).Vs[:, 0]
        init = InitialCoinState(v1 * np.exp(0.3j))
        assert initial_overlap(k0, 1, coin, init) == pytest.approx(1.0, abs=1e-12)
        for j in (2, 3, 4):
            assert initial_overlap(k0, j, coin, init) < 1e-12

    def test_flat_branches_carry_the_atom(self, coin_pi4, bell):
        from qwalk2c.quadrature import integrate

        value, _ = integrate(lambda k: branch_weights(k, coin_pi4, bell)[:, 1:3].sum(axis=1),
                             0.0, 2 * math.pi, QuadratureSpec(tol=1e-13))
        assert value / (2 * math.pi) == pytest.approx(math.sqrt(2) - 1, abs=1e-12)


class TestMoments:
    def test_zeroth(self):
        for coin, init in random_draws(5, 1):
            assert spectral_moment(0, coin, init) == pytest.approx(1.0, abs=1e-10)

    def test_bell_first_moment_vanishes(self, coin_pi4, bell):
        assert abs(spectral_moment(1, coin_pi4, bell)) < 1e-12

    def test_bell_second_moment_matches_density(self, coin_pi4, bell):
        d = limit_density(coin_pi4, bell)
        assert spectral_moment(2, coin_pi4, bell) == pytest.approx(limit_moment(d, 2), abs=1e-6)

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_against_simulation(self, r):
        coin, init = CoinParameters(math.pi / 3), InitialCoinState([1, 0, 0, 0])
        sim = normalized_moment(position_distribution(evolve(init, coin, 800)), r)
        # E[(X_t/t)^r] = limit + O(1/t).
        assert sim == pytest.approx(spectral_moment(r, coin, init), abs=5e-3)

    def test_bad_order(self, coin_pi4, bell):
        with pytest.raises(ValueError):
            spectral_moment(-1, coin_pi4, bell)


class TestInverseFourier:
    def test_t0(self, coin_pi4):
        init = InitialCoinState.normalized([1, 2j, 0.5, -1])
        np.testing.assert_allclose(inverse_fourier_amplitude(0, 0, coin_pi4, init), init.alpha, atol=1e-12)

    def test_outside_light_cone_is_zero(self, coin_pi4, bell):
        psi = inverse_fourier_wavefunction(6, coin_pi4, bell, positions=[-9, -7, 7, 12])
        assert np.max(np.abs(psi)) < 1e-10

    def test_amplitude_guard(self, coin_pi4, bell):
        with pytest.raises(ValueError):
            inverse_fourier_amplitude(4, 3, coin_pi4, bell)

    @pytest.mark.parametrize("t", [1, 2, 7, 30])
    def test_matches_direct_evolution(self, t):
        for coin, init in random_draws(4, t):
            direct = evolve(init, coin, t).amplitudes
            assert np.max(np.abs(inverse_fourier_wavefunction(t, coin, init) - direct)) < 1e-8

    def test_single_site(self):
        coin, init = random_draws(1, 99)[0]
        direct = evolve(init, coin, 12)
        np.testing.assert_allclose(inverse_fourier_amplitude(-5, 12, coin, init), direct.amplitude(-5), atol=1e-8)


def test_flat_band_is_long_time_limit(coin_pi4, bell):
    # Ψ_t(x) -> (-1)^t × flat-band amplitude; the dispersive part decays like t^(-1/2).
    fb = flat_band_amplitude(np.arange(-3, 4), coin_pi4, bell)
    s = evolve(bell, coin_pi4, 2000)
    direct = np.array([s.amplitude(x) for x in range(-3, 4)])
    assert np.max(np.abs(direct - fb)) < 5e-3
