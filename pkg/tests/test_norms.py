"""Tests for the CVaR norm family and its characterizations."""

import numpy as np
import pytest

from cvarkit.model.norms import NormQuery
from cvarkit.norms import (
    Algorithm,
    alpha_bracket,
    benchmark_norms,
    cvar_norm,
    cvar_norm_candidates,
    cvar_norm_knapsack,
    cvar_norm_lp,
    d_norm,
    evaluate,
    knapsack_weights,
    scaled_cvar_norm,
    scaled_cvar_norm_candidates,
    scaled_cvar_norm_lp,
    speed_ratio,
)
from tests.fixtures.reference_values import (
    CONVEXITY_AT_FIFTH,
    CONVEXITY_AT_THIRD,
    CONVEXITY_AT_TWO_FIFTHS,
    CONVEXITY_X,
    CVAR_NORM_VALUES,
    KNAPSACK_ALPHA,
    KNAPSACK_VALUE,
    NORM_X,
    SCALED_NORM_VALUES,
)


def _random_vectors(seed: int, count: int, max_n: int = 12):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        yield rng.normal(0.0, 5.0, size=n), float(rng.uniform(0.0, 0.99))


class TestReferenceValues:
    @pytest.mark.parametrize("alpha, expected", sorted(SCALED_NORM_VALUES.items()))
    def test_scaled_norm(self, alpha, expected):
        assert scaled_cvar_norm(NORM_X, alpha).value == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("alpha, expected", sorted(CVAR_NORM_VALUES.items()))
    def test_cvar_norm(self, alpha, expected):
        assert cvar_norm(NORM_X, alpha).value == pytest.approx(expected, abs=1e-12)

    def test_knapsack_reference(self):
        assert cvar_norm_knapsack(NORM_X, KNAPSACK_ALPHA) == pytest.approx(KNAPSACK_VALUE, abs=1e-12)
        q = knapsack_weights(NORM_X, KNAPSACK_ALPHA)
        np.testing.assert_allclose(q, [1.0, 1.0, 0.0, 0.4])
        assert q @ np.abs(NORM_X) == pytest.approx(KNAPSACK_VALUE)

    def test_breakdown_bracket(self):
        between = scaled_cvar_norm(NORM_X, 1.0 / 3.0)
        assert between.bracket == (0.25, 0.5)
        assert between.weight == pytest.approx(0.75)
        assert not between.on_grid
        assert scaled_cvar_norm(NORM_X, 0.5).on_grid

    def test_alpha_bracket(self):
        assert alpha_bracket(4, 0.5) == (2, True)
        assert alpha_bracket(4, 0.6) == (2, False)
        assert alpha_bracket(4, 0.9) == (3, False)
        assert alpha_bracket(3, 1.0 / 3.0) == (1, True)


class TestCharacterizationsAgree:
    def test_component_lp_candidates_knapsack(self):
        for x, alpha in _random_vectors(1, 30):
            expected = cvar_norm(x, alpha).value
            assert cvar_norm_candidates(x, alpha) == pytest.approx(expected, abs=1e-9)
            assert cvar_norm_knapsack(x, alpha) == pytest.approx(expected, abs=1e-9)
            assert cvar_norm_lp(x, alpha) == pytest.approx(expected, abs=1e-8)

    def test_scaled_paths(self):
        for x, alpha in _random_vectors(2, 30):
            expected = scaled_cvar_norm(x, alpha).value
            assert scaled_cvar_norm_candidates(x, alpha) == pytest.approx(expected, abs=1e-9)
            assert scaled_cvar_norm_lp(x, alpha) == pytest.approx(expected, abs=1e-8)

    def test_d_norm_matches_cvar_norm(self):
        for x, alpha in _random_vectors(3, 50):
            kappa = x.size * (1.0 - alpha)
            if kappa < 1.0:
                continue
            assert d_norm(x, kappa) == pytest.approx(cvar_norm(x, alpha).value, abs=1e-9)

    @pytest.mark.parametrize("algorithm", list(Algorithm))
    def test_evaluate_dispatch(self, algorithm):
        query = NormQuery(x=NORM_X, alpha=0.5)
        assert evaluate(query, algorithm) == pytest.approx(24.0, abs=1e-8)
        assert evaluate(query, algorithm, scaled=True) == pytest.approx(12.0, abs=1e-8)

    def test_scaled_alpha_one(self):
        query = NormQuery(x=NORM_X, alpha=1.0)
        assert evaluate(query, Algorithm.LP, scaled=True) == 14.0
        with pytest.raises(ValueError):
            evaluate(query, Algorithm.KNAPSACK, scaled=True)


class TestNormProperties:
    def setup_method(self):
        self.rng = np.random.default_rng(20150722)

    def test_norm_axioms(self):
        for _ in range(200):
            n = int(self.rng.integers(1, 10))
            x, y = self.rng.normal(size=n), self.rng.normal(size=n)
            alpha = float(self.rng.uniform(0.0, 0.99))
            t = float(self.rng.normal(0.0, 3.0))
            cx = cvar_norm(x, alpha).value
            assert cvar_norm(x + y, alpha).value <= cx + cvar_norm(y, alpha).value + 1e-9
            assert cvar_norm(t * x, alpha).value == pytest.approx(abs(t) * cx, abs=1e-9)
            assert cx > 0.0

    def test_scaled_norm_between_mean_and_max(self):
        for x, alpha in _random_vectors(4, 100):
            value = scaled_cvar_norm(x, alpha).value
            assert np.abs(x).mean() - 1e-12 <= value <= np.abs(x).max() + 1e-12

    def test_endpoints(self):
        x = np.array(NORM_X)
        assert cvar_norm(x, 0.0).value == pytest.approx(np.abs(x).sum())
        assert scaled_cvar_norm(x, 1.0).value == pytest.approx(np.abs(x).max())

    def test_monotone_in_alpha(self):
        x = self.rng.normal(size=7)
        alphas = np.linspace(0.0, 0.99, 200)
        scaled = [scaled_cvar_norm(x, a).value for a in alphas]
        plain = [cvar_norm(x, a).value for a in alphas]
        assert np.all(np.diff(scaled) >= -1e-12)
        assert np.all(np.diff(plain) <= 1e-12)

    def test_cvar_norm_concave_in_alpha(self):
        x = self.rng.normal(size=6)
        alphas = np.linspace(0.0, 0.99, 199)
        values = np.array([cvar_norm(x, a).value for a in alphas])
        assert np.all(np.diff(values, 2) <= 1e-9)

    def test_scaled_norm_not_convex_in_alpha(self):
        at_fifth = scaled_cvar_norm(CONVEXITY_X, 0.2).value
        at_third = scaled_cvar_norm(CONVEXITY_X, 1.0 / 3.0).value
        at_two_fifths = scaled_cvar_norm(CONVEXITY_X, 0.4).value
        assert at_fifth == pytest.approx(CONVEXITY_AT_FIFTH)
        assert at_third == pytest.approx(CONVEXITY_AT_THIRD)
        assert at_two_fifths == pytest.approx(CONVEXITY_AT_TWO_FIFTHS)
        chord = at_fifth + (1.0 / 3.0 - 0.2) / 0.2 * (at_two_fifths - at_fifth)
        assert at_third > chord

    def test_d_norm_between_inf_and_one_norms(self):
        for x, _ in _random_vectors(5, 50):
            kappa = float(self.rng.uniform(1.0, x.size)) if x.size > 1 else 1.0
            value = d_norm(x, kappa)
            assert np.abs(x).max() - 1e-12 <= value <= np.abs(x).sum() + 1e-12


class TestValidation:
    def test_cvar_norm_rejects_alpha_one(self):
        with pytest.raises(ValueError):
            cvar_norm(NORM_X, 1.0)

    def test_alpha_out_of_range(self):
        with pytest.raises(ValueError):
            scaled_cvar_norm(NORM_X, -0.1)
        with pytest.raises(ValueError):
            scaled_cvar_norm(NORM_X, 1.1)

    def test_empty_and_non_finite(self):
        with pytest.raises(ValueError):
            cvar_norm([], 0.5)
        with pytest.raises(ValueError):
            cvar_norm([1.0, float("inf")], 0.5)

    def test_d_norm_kappa_range(self):
        with pytest.raises(ValueError):
            d_norm(NORM_X, 0.5)
        with pytest.raises(ValueError):
            d_norm(NORM_X, 5.0)

    def test_zero_vector(self):
        assert cvar_norm([0.0, 0.0, 0.0], 0.5).value == 0.0
        assert cvar_norm_lp([0.0, 0.0, 0.0], 0.5) == pytest.approx(0.0, abs=1e-12)


class TestBenchmark:
    def test_zero_reps_is_empty(self):
        table = benchmark_norms(dims=(10,), reps=0)
        assert table.empty
        assert list(table.columns) == ["algo", "n", "alpha", "ms"]

    def test_small_run(self):
        table = benchmark_norms(dims=(8,), alphas=(0.0, 0.5), reps=1)
        assert len(table) == 10
        assert set(table["algo"]) == {"scaled_component", "component", "scaled_lp", "lp", "knapsack"}
        assert (table["ms"] >= 0).all()
        assert speed_ratio(table, 8) > 0

    def test_lp_skipped_above_limit(self):
        table = benchmark_norms(dims=(20,), alphas=(0.5,), reps=1, lp_max_n=10)
        assert set(table["algo"]) == {"scaled_component", "component", "knapsack"}
