"""Tests for scenario sampling and the minimum-variance and minimum-CVaR portfolios."""

import numpy as np
import pytest

from cvarkit.analytics.stats import skewness
from cvarkit.data import load_universe
from cvarkit.optimization.portfolio import (
    compare_mv_cvar,
    diversification_gap,
    efficient_frontier,
    min_cvar,
    min_variance,
    risk_report,
    scenario2_experiment,
)
from cvarkit.optimization.scenarios import ScenarioShape, psd_factor, sample_scenarios
from cvarkit.solver import InfeasibleModelError
from tests.fixtures.reference_values import MV_WEIGHTS_PCT


@pytest.fixture(scope="module")
def universe():
    return load_universe("scenario1.json")


@pytest.fixture(scope="module")
def small_scenarios(universe):
    return sample_scenarios(universe, 400, seed=11)


class TestScenarios:
    def test_shape_and_reproducibility(self, universe):
        a = sample_scenarios(universe, 50, seed=3)
        b = sample_scenarios(universe, 50, seed=3)
        assert a.losses.shape == (50, 3)
        np.testing.assert_array_equal(a.losses, b.losses)

    def test_sample_moments(self, universe):
        scen = sample_scenarios(universe, 20_000, seed=5)
        np.testing.assert_allclose(scen.losses.mean(axis=0), universe.mu, atol=3e-3)
        np.testing.assert_allclose(np.cov(scen.losses, rowvar=False), universe.sigma, atol=5e-4)

    def test_skewed_draws(self, universe):
        scen = sample_scenarios(universe, 20_000, seed=5, shape=ScenarioShape.skewed(1.5))
        assert skewness(scen.losses[:, 0]) > 0.8
        left = sample_scenarios(universe, 20_000, seed=5, shape=ScenarioShape.skewed(-1.5))
        assert skewness(left.losses[:, 0]) < -0.8

    def test_needs_one_draw(self, universe):
        with pytest.raises(ValueError):
            sample_scenarios(universe, 0, seed=1)

    def test_semidefinite_factor(self):
        cov = np.array([[1.0, 1.0], [1.0, 1.0]])
        factor = psd_factor(cov)
        np.testing.assert_allclose(factor @ factor.T, cov, atol=1e-12)

    def test_indefinite_rejected(self):
        with pytest.raises(ValueError):
            psd_factor(np.array([[1.0, 2.0], [2.0, 1.0]]))


class TestMinVariance:
    def test_reference_weights(self, universe):
        port = min_variance(universe, 0.011)
        np.testing.assert_allclose(100.0 * port.weights, MV_WEIGHTS_PCT, atol=0.5)
        assert port.binding()

    def test_feasible_portfolio(self, universe):
        port = min_variance(universe, 0.009)
        assert port.weights.sum() == pytest.approx(1.0)
        assert np.all(port.weights >= 0.0)
        assert -port.expected_loss >= 0.009 - 1e-9

    def test_infeasible_return(self, universe):
        with pytest.raises(InfeasibleModelError):
            min_variance(universe, 0.02)

    def test_frontier_marks_infeasible_points(self, universe):
        points = efficient_frontier(universe, [0.006, 0.011, 0.02])
        assert points[0][1] < points[1][1]
        assert points[2] == (0.02, None)

    def test_frontier_threads_match(self, universe):
        grid = [0.006, 0.008, 0.01]
        assert efficient_frontier(universe, grid, threads=3) == efficient_frontier(universe, grid)

    def test_diversification_gap(self, universe):
        rng = np.random.default_rng(8)
        for w in rng.dirichlet(np.ones(3), size=50):
            assert diversification_gap(universe, w) >= -1e-12


class TestMinCvar:
    def test_objective_is_scenario_cvar(self, universe, small_scenarios):
        port = min_cvar(small_scenarios, universe.mu, 0.011, 0.95)
        report = risk_report(small_scenarios.portfolio_losses(port.weights), 0.95)
        assert port.cvar == pytest.approx(report.cvar, abs=1e-7)
        assert port.cvar >= port.var - 1e-12

    def test_constraints_hold(self, universe, small_scenarios):
        port = min_cvar(small_scenarios, universe.mu, 0.009, 0.9)
        assert port.weights.sum() == pytest.approx(1.0)
        assert np.all(port.weights >= 0.0)
        assert port.return_slack >= -1e-9

    def test_alpha_range(self, universe, small_scenarios):
        with pytest.raises(ValueError):
            min_cvar(small_scenarios, universe.mu, 0.009, 1.0)

    def test_infeasible_return(self, universe, small_scenarios):
        with pytest.raises(InfeasibleModelError):
            min_cvar(small_scenarios, universe.mu, 0.02, 0.95)

    def test_comparison_frame(self, universe):
        frame = compare_mv_cvar(universe, (0.006, 0.011), alpha=0.95, k_draws=300, seed=2)
        assert list(frame.columns) == ["required_return", "asset", "mv_weight", "cvar_weight"]
        assert len(frame) == 6
        sums = frame.groupby("required_return")[["mv_weight", "cvar_weight"]].sum()
        np.testing.assert_allclose(sums.to_numpy(), 1.0, atol=1e-8)


class TestSkewedScenarios:
    def test_cvar_optimum_beats_mv_on_its_scenarios(self):
        universe = load_universe("scenario2.json")
        result = scenario2_experiment(universe, skew=-1.0, k_draws=300, seed=4)
        assert result.cvar_report.cvar <= result.mv_report.cvar + 1e-9
        frame = result.to_frame(universe.labels)
        assert list(frame["portfolio"]) == ["mv", "cvar"]
        assert set(universe.labels) <= set(frame.columns)
