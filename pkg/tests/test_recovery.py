"""Tests for CVaR-norm atoms, recovery programs and recovery experiments."""

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from cvarkit.model.recovery import AlphaBracket, AtomKind, AtomSet, NormKind, RecoveryInstance
from cvarkit.norms import cvar_norm
from cvarkit.recovery import (
    SignalKind,
    SignalSpec,
    atom_norm,
    atoms,
    binary_share,
    classify_atom,
    contains,
    expected_gaussian_norm,
    generate_signal,
    l1_bound,
    lambda_bounds,
    measurement_bounds,
    measurement_matrix,
    monotonicity_residual,
    norm_value,
    project_hyperplane,
    recover,
    recovery_program,
    success_probability_bound,
    sweep,
)
from cvarkit.recovery.experiments import projection_experiment
from tests.fixtures.reference_values import (
    L1_BOUND_K1,
    L1_BOUND_K3,
    PROJECTION_ALPHA,
    PROJECTION_BINARY_SHARE,
    PROJECTION_P,
)


@pytest.fixture
def atomset() -> AtomSet:
    return AtomSet(dimension=PROJECTION_P, alpha=PROJECTION_ALPHA)


class TestAtoms:
    def test_every_atom_has_unit_norm(self, atomset):
        listed = list(atoms(atomset))
        assert len(listed) == 2 * 4 + 2**4
        for _, vector in listed:
            assert cvar_norm(vector, atomset.alpha).value == pytest.approx(1.0)

    def test_explicit_forms_match(self):
        rng = np.random.default_rng(12)
        high = AtomSet(dimension=5, alpha=0.7)
        low = AtomSet(dimension=5, alpha=0.1)
        assert high.bracket is AlphaBracket.HIGH
        assert low.bracket is AlphaBracket.LOW
        for _ in range(50):
            x = rng.normal(size=5)
            assert atom_norm(x, high) == pytest.approx(cvar_norm(x, 0.7).value)
            assert atom_norm(x, low) == pytest.approx(cvar_norm(x, 0.1).value)

    def test_alpha_outside_brackets(self):
        with pytest.raises(ValidationError):
            AtomSet(dimension=4, alpha=0.3)

    def test_classification(self, atomset):
        scale = atomset.binary_scale
        assert classify_atom([0.0, 0.0, -1.0, 0.0], atomset).label == "-e3"
        label = classify_atom([scale, -scale, scale, scale], atomset)
        assert label.kind is AtomKind.BINARY
        assert label.label == "b(+1,-1,+1,+1)"
        assert classify_atom([0.5, 0.0, 0.0, 0.0], atomset).label == "other"
        assert classify_atom([1.0, 0.0, 0.0], atomset).kind is AtomKind.NONE
        assert contains(atomset, [0.0, 1.0 + 1e-8, 0.0, 0.0])
        assert not contains(atomset, [0.0, 1.01, 0.0, 0.0])


class TestProjection:
    def test_unit_normal_projects_to_unit_vector(self):
        np.testing.assert_allclose(project_hyperplane([1.0, 0.0, 0.0, 0.0], 5.0, 0.625), [1.0, 0.0, 0.0, 0.0], atol=1e-9)

    def test_offset_only_scales(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            g = rng.normal(size=4)
            a = project_hyperplane(g, 5.0, 0.625)
            np.testing.assert_allclose(project_hyperplane(g, 1.0, 0.625), a, atol=1e-8)
            np.testing.assert_allclose(project_hyperplane(g, -5.0, 0.625), -a, atol=1e-8)
            assert cvar_norm(a, 0.625).value == pytest.approx(1.0)

    def test_degenerate_hyperplane(self):
        with pytest.raises(ValueError):
            project_hyperplane([0.0, 0.0], 1.0, 0.5)
        with pytest.raises(ValueError):
            project_hyperplane([1.0, 0.0], 0.0, 0.5)

    def test_projections_land_on_atoms(self):
        frame = projection_experiment(PROJECTION_P, PROJECTION_ALPHA, trials=300, seed=1)
        assert list(frame.columns) == ["atom_label", "ratio"]
        assert len(frame) == 2 * 4 + 2**4 + 1
        assert frame["ratio"].sum() == pytest.approx(1.0)
        assert frame.set_index("atom_label").loc["other", "ratio"] == 0.0
        assert binary_share(frame) == pytest.approx(PROJECTION_BINARY_SHARE, abs=0.06)

    def test_threads_give_same_table(self):
        serial = projection_experiment(PROJECTION_P, PROJECTION_ALPHA, trials=20, seed=3)
        threaded = projection_experiment(PROJECTION_P, PROJECTION_ALPHA, trials=20, seed=3, threads=4)
        pd.testing.assert_frame_equal(serial, threaded)


class TestRecoverPrograms:
    def setup_method(self):
        self.rng = np.random.default_rng(30)
        self.phi = self.rng.normal(size=(6, 6))
        self.truth = np.array([0.0, 1.0, 0.0, 0.0, -1.0, 0.0])

    @pytest.mark.parametrize("norm, alpha", [(NormKind.L1, None), (NormKind.LINF, None), (NormKind.CVAR, 0.5)])
    def test_square_system_is_recovered(self, norm, alpha):
        instance = RecoveryInstance(phi=self.phi, y=self.phi @ self.truth, norm=norm, alpha=alpha)
        outcome = recover(instance, self.truth)
        assert outcome.success
        assert outcome.residual == pytest.approx(0.0, abs=1e-8)
        assert outcome.objective == pytest.approx(norm_value(self.truth, norm, alpha), abs=1e-8)

    def test_exact_program_rows(self):
        instance = RecoveryInstance(phi=self.phi[:3], y=np.zeros(3), norm=NormKind.CVAR, alpha=0.5)
        program = recovery_program(instance)
        assert program.matrix.shape == (2 * 6 + 3, 6 + 1 + 6)

    @pytest.mark.parametrize("norm, alpha", [(NormKind.L1, None), (NormKind.CVAR, 0.6)])
    def test_robust_residual_within_noise_bound(self, norm, alpha):
        phi = self.rng.normal(size=(5, 10)) / np.sqrt(5)
        truth = np.zeros(10)
        truth[[2, 7]] = [1.0, -1.0]
        noise = self.rng.normal(size=5)
        noise *= 0.05 / np.linalg.norm(noise)
        instance = RecoveryInstance(phi=phi, y=phi @ truth + noise, norm=norm, alpha=alpha, noise_bound=0.1)
        outcome = recover(instance)
        assert outcome.residual <= 0.1 + 1e-8
        assert outcome.success is None

    def test_instance_validation(self):
        with pytest.raises(ValueError):
            RecoveryInstance(phi=self.phi, y=np.zeros(5), norm=NormKind.L1)
        with pytest.raises(ValueError):
            RecoveryInstance(phi=self.phi, y=np.zeros(6), norm=NormKind.CVAR)
        with pytest.raises(ValueError):
            RecoveryInstance(phi=self.phi, y=np.zeros(6), norm=NormKind.L1, noise_bound=-1.0)


class TestSignals:
    def test_sparse_signal(self):
        spec = SignalSpec(kind=SignalKind.SPARSE, k=3)
        x = generate_signal(spec, 10, seed=5, trial=0)
        assert np.count_nonzero(x) == 3
        assert set(np.abs(x[x != 0])) == {1.0}
        np.testing.assert_array_equal(x, generate_signal(spec, 10, seed=5, trial=0))
        assert spec.label == "sparse_k3"

    def test_too_many_spikes(self):
        with pytest.raises(ValueError):
            generate_signal(SignalSpec(kind=SignalKind.SPARSE, k=5), 4, seed=1, trial=0)

    def test_single_atom(self):
        spec = SignalSpec(kind=SignalKind.SINGLE_ATOM, alpha=0.625)
        x = generate_signal(spec, 4, seed=2, trial=1)
        np.testing.assert_allclose(np.abs(x), spec.binary_scale(4))
        assert spec.label == "single_atom"

    def test_binary_sum_and_mixed(self):
        spec = SignalSpec(kind=SignalKind.BINARY_SUM, k=2, alpha=0.5)
        scale = spec.binary_scale(6)
        x = generate_signal(spec, 6, seed=3, trial=0)
        for value in np.abs(x):
            assert min(abs(value), abs(value - 2 * scale)) < 1e-12
        mixed = generate_signal(SignalSpec(kind=SignalKind.MIXED, alpha=0.5), 6, seed=3, trial=0)
        assert np.sum(np.abs(np.abs(mixed) - scale) > 1e-12) == 2

    def test_scale_needs_alpha(self):
        with pytest.raises(ValueError):
            generate_signal(SignalSpec(kind=SignalKind.SINGLE_ATOM), 4, seed=1, trial=0)

    def test_measurement_matrix(self):
        phi = measurement_matrix(50, 400, seed=1, trial=0)
        assert phi.shape == (50, 400)
        assert phi.var() == pytest.approx(1.0 / 50, rel=0.1)
        np.testing.assert_array_equal(phi, measurement_matrix(50, 400, seed=1, trial=0))
        assert not np.allclose(phi, measurement_matrix(50, 400, seed=1, trial=1))


class TestSweep:
    def test_full_measurements_always_recover(self):
        result = sweep(
            8,
            SignalSpec(kind=SignalKind.SPARSE, k=1),
            [NormKind.L1, NormKind.CVAR],
            n_grid=[3, 8],
            trials=3,
            seed=2,
            alpha=0.5,
        )
        assert len(result.rows) == 4
        assert result.probability(8, "l1") == 1.0
        assert result.probability(8, "cvar") == 1.0
        frame = result.to_frame()
        assert list(frame.columns) == ["norm", "signal", "n", "trials", "successes", "probability"]
        assert set(frame["signal"]) == {"sparse_k1"}

    def test_threads_match_serial(self):
        args = (6, SignalSpec(kind=SignalKind.SPARSE, k=1), [NormKind.L1], [2, 4], 3, 9)
        serial = sweep(*args).to_frame()
        threaded = sweep(*args, threads=3).to_frame()
        pd.testing.assert_frame_equal(serial, threaded)

    def test_grid_validation(self):
        spec = SignalSpec(kind=SignalKind.SPARSE, k=1)
        with pytest.raises(ValueError):
            sweep(4, spec, [NormKind.L1], n_grid=[5], trials=1, seed=0)
        with pytest.raises(ValueError):
            sweep(4, spec, [NormKind.L1], n_grid=[2], trials=0, seed=0)

    def test_missing_row(self):
        result = sweep(4, SignalSpec(kind=SignalKind.SPARSE, k=1), [NormKind.L1], [4], 1, 0)
        with pytest.raises(KeyError):
            result.probability(3)

    def test_monotonicity_residual(self):
        assert monotonicity_residual([0.0, 0.5, 1.0]) == 0.0
        assert monotonicity_residual([0.2, 0.6, 0.4, 1.0]) == pytest.approx(0.1)
        assert monotonicity_residual([]) == 0.0


class TestBounds:
    def test_measurement_bounds(self):
        assert measurement_bounds(10.0) == pytest.approx(11.0)
        assert measurement_bounds(10.0, epsilon=0.5) == pytest.approx(46.0)
        with pytest.raises(ValueError):
            measurement_bounds(-1.0)
        with pytest.raises(ValueError):
            measurement_bounds(10.0, epsilon=1.0)

    def test_l1_bound(self):
        assert l1_bound(100, 1) == pytest.approx(L1_BOUND_K1, abs=1e-4)
        assert l1_bound(100, 3) == pytest.approx(L1_BOUND_K3, abs=1e-4)
        with pytest.raises(ValueError):
            l1_bound(3, 4)

    def test_expected_gaussian_norm(self):
        assert expected_gaussian_norm(1) == pytest.approx(np.sqrt(2.0 / np.pi))
        assert expected_gaussian_norm(2) == pytest.approx(np.sqrt(np.pi / 2.0))
        for k in range(1, 60):
            low, high = lambda_bounds(k)
            assert low <= expected_gaussian_norm(k) <= high

    def test_success_probability_bound(self):
        assert success_probability_bound(10, width=100.0) == 0.0
        assert success_probability_bound(400, width=1.0) == pytest.approx(1.0)
        assert 0.0 < success_probability_bound(50, width=4.0) < 1.0
        assert success_probability_bound(50, width=4.0, epsilon=0.1) < success_probability_bound(50, width=4.0)
