import json
import math

import numpy as np
import pytest

from qwalk2c.limit_laws import limit_density, stationary_law
from qwalk2c.verify import (
    TOLERANCES,
    CheckResult,
    SuiteReport,
    decay_slope,
    discretized_limit,
    ks_distance,
    levy_distance,
    localization_check,
    parity_gap,
    simulation_checks,
    theorem_consistency_suite,
)
from qwalk2c.walk_engine import InitialCoinState, PositionDistribution, evolve, position_distribution


class TestDistances:
    @pytest.mark.parametrize("preset", ["bell", "nonlocalizing"])
    def test_ks_of_discretized_limit_scales(self, coin_pi4, preset):
        # Half a cell next to the inverse-square-root edge holds O(t^(-1/2)) mass.
        d = limit_density(coin_pi4, getattr(InitialCoinState, preset)())
        scaled = [ks_distance(discretized_limit(d, t), d) * math.sqrt(t) for t in (125, 500, 2000)]
        assert scaled[2] <= scaled[1] <= scaled[0] < 0.5

    def test_ks_at_t1(self, coin_pi4, bell):
        # One step: mass 1/4, 1/2, 1/4 on -1, 0, 1; F jumps by c00 at 0.
        d = limit_density(coin_pi4, bell)
        dist = position_distribution(evolve(bell, coin_pi4, 1))
        assert 0 < ks_distance(dist, d) <= 1

    def test_ks_needs_positive_t(self, coin_pi4, bell):
        d = limit_density(coin_pi4, bell)
        with pytest.raises(ValueError):
            ks_distance(position_distribution(evolve(bell, coin_pi4, 0)), d)

    def test_levy_shrinks(self, coin_pi4, bell):
        d = limit_density(coin_pi4, bell)
        vals = [levy_distance(position_distribution(evolve(bell, coin_pi4, t)), d) for t in (125, 1000)]
        assert vals[1] < vals[0] < 0.05

    def test_levy_bounded_by_ks(self, coin_pi4, nonloc):
        d = limit_density(coin_pi4, nonloc)
        dist = position_distribution(evolve(nonloc, coin_pi4, 300))
        assert levy_distance(dist, d) <= ks_distance(dist, d) + 1e-6


class TestHelpers:
    def test_decay_slope_exact_geometric(self):
        xs = np.arange(-10, 11)
        p = 0.3 * 0.2 ** np.abs(xs)
        dist = PositionDistribution(10, xs, p / p.sum())
        assert decay_slope(dist, 1, 8) == pytest.approx(math.log(0.2), rel=1e-12)

    def test_decay_slope_needs_points(self):
        xs = np.arange(-3, 4)
        dist = PositionDistribution(3, xs, np.where(xs == 0, 1.0, 0.0))
        with pytest.raises(ValueError):
            decay_slope(dist, 1, 3)

    def test_parity_gap_zero_for_same(self, coin_pi4, bell):
        dist = position_distribution(evolve(bell, coin_pi4, 20))
        assert parity_gap(dist, dist) == 0.0


class TestLocalizationCheck:
    def test_fields(self, coin_pi4, bell):
        rep = localization_check(coin_pi4, bell, 400)
        assert rep.t_values == [50, 100, 200, 400]
        assert len(rep.ks_distances) == len(rep.p0_trace) == 4
        assert rep.p0_limit == pytest.approx(stationary_law(coin_pi4, bell).p0)
        assert rep.decay_theory == pytest.approx(math.log(stationary_law(coin_pi4, bell).ratio))
        assert rep.fit_window == (1, 8)
        assert rep.p0_error < 1e-2

    def test_requires_long_run(self, coin_pi4, bell):
        with pytest.raises(ValueError):
            localization_check(coin_pi4, bell, 50)


class TestSuite:
    def test_small_suite_passes(self):
        rep = theorem_consistency_suite(samples=5, seed=3)
        assert rep.passed, rep.summary()
        assert len(rep.families) >= 6
        assert rep.first_failure() is None

    def test_zero_samples(self):
        rep = theorem_consistency_suite(samples=0)
        assert rep.passed and rep.checks

    def test_negative_samples(self):
        with pytest.raises(ValueError):
            theorem_consistency_suite(samples=-1)

    def test_independent_of_jobs(self):
        a = theorem_consistency_suite(samples=6, seed=9, jobs=1)
        b = theorem_consistency_suite(samples=6, seed=9, jobs=2)
        assert a.to_json() == b.to_json()

    def test_json_report(self):
        doc = json.loads(theorem_consistency_suite(samples=2, seed=1).to_json())
        assert doc["meta"]["passed"] is True
        row = doc["rows"][0]
        assert set(row) == {"name", "family", "parameters", "value", "bound", "passed"}

    def test_first_failure_reported(self):
        rep = SuiteReport(seed=0, samples=0, checks=[
            CheckResult("ok", "a", {}, 0.0, 1.0, True),
            CheckResult("bad", "b", {"beta": 0.3}, 2.0, 1.0, False),
        ])
        assert not rep.passed
        assert rep.first_failure().name == "bad"
        assert "first failure: bad" in rep.summary()

    def test_tolerance_table(self):
        assert TOLERANCES["pinned"] == 1e-12
        assert all(v > 0 for v in TOLERANCES.values())


@pytest.mark.slow
def test_simulation_checks_pass():
    checks = simulation_checks()
    bad = [c for c in checks if not c.passed]
    assert not bad, bad
    assert {c.family for c in checks} == {"simulation", "fourier_oracle"}
