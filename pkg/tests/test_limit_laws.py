import math

import numpy as np
import pytest
from hypothesis import given, settings

from qwalk2c.limit_laws import (
    LimitDensity,
    StationaryLaw,
    density_at,
    limit_cdf,
    limit_density,
    limit_moment,
    stationary_amplitudes,
    stationary_law,
)
from qwalk2c.spectral import flat_band_amplitude, spectral_moment
from qwalk2c.walk_engine import CoinParameters, InitialCoinState, evolve, position_distribution

from conftest import betas, coin_states, random_draws

SQRT2 = math.sqrt(2)


def antiderivative_cdf(d: LimitDensity, y):
    """Closed-form F(y) - c00 H(y), from the substitution y = cos β sin θ."""
    sb, cb = math.sin(d.beta), math.cos(d.beta)
    th = np.arcsin(np.clip(np.asarray(y, float) / cb, -1, 1))

    def g(th):
        return (sb / math.pi) * (
            (d.c0 + d.c2) / sb * np.arctan2(sb * np.sin(th), np.cos(th))
            - d.c2 * th
            - d.c1 / sb * np.arctan(cb * np.cos(th) / sb)
        )

    return g(th) - g(-math.pi / 2)


class TestPinnedDensity:
    def test_bell(self, coin_pi4, bell):
        d = limit_density(coin_pi4, bell)
        assert d.c00 == pytest.approx(SQRT2 - 1, abs=1e-12)
        assert d.coefficients == pytest.approx((0.0, 0.0, 2.0), abs=1e-12)

    def test_nonlocalizing(self, coin_pi4, nonloc):
        d = limit_density(coin_pi4, nonloc)
        assert abs(d.c00) < 1e-12
        y = np.linspace(-0.7, 0.7, 57)
        expected = 1.0 / (math.pi * (1 - y**2) * np.sqrt(1 - 2 * y**2))
        assert np.max(np.abs(density_at(d, y) - expected)) < 1e-10

    def test_bell_density_values(self, coin_pi4, bell):
        d = limit_density(coin_pi4, bell)
        assert density_at(d, 0.5) == pytest.approx(2 * 0.25 / (math.pi * 0.75 * math.sqrt(0.5)), rel=1e-12)
        assert density_at(d, 0.9) == 0.0 and density_at(d, -0.9) == 0.0
        assert density_at(d, math.cos(math.pi / 4)) == math.inf

    def test_rejects_negative_atom(self):
        with pytest.raises(ValueError):
            LimitDensity(c00=-1e-6, c0=0.5, c1=0.0, c2=0.0, beta=0.5)


class TestCDF:
    @settings(max_examples=30)
    @given(betas, coin_states())
    def test_matches_antiderivative(self, beta, init):
        d = limit_density(CoinParameters(beta), init)
        y = np.linspace(-math.cos(beta), math.cos(beta), 23)
        ac = limit_cdf(d, y) - np.where(y >= 0, d.c00, 0.0)
        assert np.max(np.abs(ac - antiderivative_cdf(d, y))) < 1e-10

    def test_bell_shape(self, coin_pi4, bell):
        d = limit_density(coin_pi4, bell)
        assert limit_cdf(d, -1.0) == pytest.approx(0.0, abs=1e-14)
        assert limit_cdf(d, 1.0) == pytest.approx(1.0, abs=1e-10)
        jump = limit_cdf(d, 0.0) - limit_cdf(d, 0.0, left=True)
        assert jump == pytest.approx(SQRT2 - 1, abs=1e-14)
        assert limit_cdf(d, 0.0, left=True) == pytest.approx((1 - d.c00) / 2, abs=1e-10)

    @settings(max_examples=20)
    @given(betas, coin_states())
    def test_monotone(self, beta, init):
        d = limit_density(CoinParameters(beta), init)
        f = limit_cdf(d, np.linspace(-1, 1, 101))
        assert np.all(np.diff(f) >= -1e-12)

    def test_unsorted_input(self, coin_pi4, bell):
        d = limit_density(coin_pi4, bell)
        y = np.array([0.3, -0.5, 0.1, 0.0, -0.2])
        np.testing.assert_allclose(limit_cdf(d, y), [limit_cdf(d, v) for v in y], atol=1e-13)


class TestMassIdentities:
    @settings(max_examples=50)
    @given(betas, coin_states())
    def test_total_mass_one(self, beta, init):
        d = limit_density(CoinParameters(beta), init)
        assert d.c00 >= -1e-12
        assert d.c00 + d.c0 + d.c2 * (1 - math.sin(beta)) == pytest.approx(1.0, abs=1e-10)
        assert d.total_mass() == pytest.approx(1.0, abs=1e-8)

    @settings(max_examples=50)
    @given(betas, coin_states())
    def test_density_nonnegative(self, beta, init):
        d = limit_density(CoinParameters(beta), init)
        y = np.linspace(-math.cos(beta), math.cos(beta), 203)[1:-1]
        assert np.min(density_at(d, y)) >= -1e-12

    @pytest.mark.parametrize("r", [0, 1, 2, 3, 4])
    def test_moments_match_spectral(self, r):
        for coin, init in random_draws(5, 100 + r):
            d = limit_density(coin, init)
            assert limit_moment(d, r) == pytest.approx(spectral_moment(r, coin, init), abs=1e-6)

    def test_atom_matches_flat_band_weight(self):
        for coin, init in random_draws(10, 7):
            law = stationary_law(coin, init)
            d = limit_density(coin, init)
            assert law.total_mass() == pytest.approx(d.c00, abs=1e-10)


class TestStationaryLaw:
    def test_bell_values(self, coin_pi4, bell):
        law = stationary_law(coin_pi4, bell)
        assert law.p0 == pytest.approx(3 - 2 * SQRT2, abs=1e-12)
        assert law.j_plus == pytest.approx(4.0, abs=1e-12)
        assert law.j_minus == pytest.approx(4.0, abs=1e-12)
        assert law.ratio == pytest.approx((3 - 2 * SQRT2) ** 2, abs=1e-12)
        assert law.ratio == pytest.approx(0.0294373, abs=1e-7)
        assert law.total_mass() == pytest.approx(SQRT2 - 1, abs=1e-12)
        assert law.probability(1) == pytest.approx(0.117749, abs=1e-6)

    def test_geometric_tail(self):
        for coin, init in random_draws(5, 3):
            law = stationary_law(coin, init)
            p = law.probability(np.arange(1, 7))
            q = law.probability(np.arange(-1, -7, -1))
            np.testing.assert_allclose(p[1:] / p[:-1], law.ratio, rtol=1e-12)
            np.testing.assert_allclose(q[1:] / q[:-1], law.ratio, rtol=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            StationaryLaw(p0=0.1, j_plus=1, j_minus=1, ratio=1.0, beta=0.5)
        with pytest.raises(ValueError):
            StationaryLaw(p0=-0.1, j_plus=1, j_minus=1, ratio=0.5, beta=0.5)

    def test_orientation_against_simulation(self):
        # |00> moves right on the first step, yet the trapped mass sits mostly on the left.
        coin, init = CoinParameters(math.pi / 3), InitialCoinState([1, 0, 0, 0])
        law = stationary_law(coin, init)
        assert law.probability(-1) == pytest.approx(0.2154, abs=1e-3)
        # The dispersive cross term decays like t^(-1/2).
        errs = []
        for t in (1000, 4000):
            dist = position_distribution(evolve(init, coin, t))
            errs.append(max(abs(dist.at(x) - law.probability(x)) for x in (-2, -1, 1, 2)))
        assert errs[1] < 0.6 * errs[0] and errs[1] < 5e-3
        assert law.probability(-1) > law.probability(1)


class TestStationaryAmplitudes:
    def test_bell_constants(self, coin_pi4, bell):
        amp = stationary_amplitudes(coin_pi4, bell)
        assert amp.z1 == pytest.approx(-0.171573, abs=1e-6)
        assert amp.z2 == pytest.approx(-5.828427, abs=1e-6)
        assert amp.z1 * amp.z2 == pytest.approx(1.0, abs=1e-12)

    def test_against_flat_band_and_law(self):
        xs = np.arange(-10, 11)
        for coin, init in random_draws(50, 21):
            amp = stationary_amplitudes(coin, init)
            direct = np.array([amp.amplitude(x) for x in xs])
            fb = flat_band_amplitude(xs, coin, init)
            assert np.max(np.abs(direct - fb)) < 1e-10
            law = stationary_law(coin, init)
            np.testing.assert_allclose(amp.probability(xs), law.probability(xs), atol=1e-12)

    def test_sign_alternation(self, coin_pi4, bell):
        amp = stationary_amplitudes(coin_pi4, bell)
        for t in (1000, 1001):
            psi = evolve(bell, coin_pi4, t).amplitude(0)
            np.testing.assert_allclose(psi, amp.amplitude(0, t=t), atol=2e-3)

    @settings(max_examples=30)
    @given(betas, coin_states())
    def test_mirror_swaps_tails(self, beta, init):
        coin = CoinParameters(beta)
        law, mirror = stationary_law(coin, init), stationary_law(coin, init.reflected())
        assert mirror.j_plus == pytest.approx(law.j_minus, abs=1e-10)
        assert mirror.p0 == pytest.approx(law.p0, abs=1e-10)
