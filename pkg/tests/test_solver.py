"""Tests for the embedded LP and QP solvers."""

import numpy as np
import pytest

from cvarkit.config import LpMethod, PricingRule, SolverConfig
from cvarkit.model.market import ScenarioSet
from cvarkit.optimization.portfolio import cvar_program
from cvarkit.solver import (
    InfeasibleModelError,
    LinearProgram,
    QuadraticProgram,
    Relation,
    SolveStatus,
    solve_lp,
    solve_qp,
    write_lp,
)
from tests.fixtures.sample_programs import (
    BOUNDED_BOUNDS,
    BOUNDED_OBJECTIVE,
    BOUNDED_OPTIMUM,
    BOUNDED_ROWS,
    BOUNDED_X,
    DUAL_INFEASIBLE_OBJECTIVE,
    DUAL_INFEASIBLE_ROWS,
    FREE_BOUNDS,
    FREE_OBJECTIVE,
    FREE_OPTIMUM,
    FREE_ROWS,
    INFEASIBLE_OBJECTIVE,
    INFEASIBLE_ROWS,
    PRODUCTION_OBJECTIVE,
    PRODUCTION_OPTIMUM,
    PRODUCTION_ROWS,
    PRODUCTION_X,
    PROJECTION_HESSIAN,
    PROJECTION_LINEAR,
    PROJECTION_X,
    SLACK_SINGLETON_OBJECTIVE,
    SLACK_SINGLETON_OPTIMUM,
    SLACK_SINGLETON_ROWS,
    SLACK_SINGLETON_X,
    UNBOUNDED_OBJECTIVE,
    UNBOUNDED_ROWS,
)


@pytest.fixture
def production() -> LinearProgram:
    return LinearProgram.from_rows(PRODUCTION_OBJECTIVE, PRODUCTION_ROWS)


@pytest.fixture
def scenario_lp() -> LinearProgram:
    rng = np.random.default_rng(3)
    losses = rng.normal(-0.01, 0.05, size=(40, 3))
    mu = losses.mean(axis=0)
    return cvar_program(ScenarioSet(losses), mu, float((-mu).min()), 0.9)


class TestLinearProgram:
    def test_default_bounds(self, production):
        np.testing.assert_array_equal(production.lower, [0.0, 0.0])
        assert np.all(np.isinf(production.upper))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            LinearProgram(objective=[1.0, 2.0], matrix=[[1.0]], relations=(Relation.LE,), rhs=[1.0])

    def test_inverted_bounds(self):
        with pytest.raises(ValueError):
            LinearProgram.from_rows([1.0], [([1.0], "<=", 1.0)], bounds=[(2.0, 1.0)])

    def test_max_violation(self, production):
        assert production.max_violation([2.0, 6.0]) == pytest.approx(0.0)
        assert production.max_violation([5.0, 0.0]) == pytest.approx(1.0)


class TestSolveLp:
    def test_textbook_optimum(self, production):
        result = solve_lp(production)
        assert result.status is SolveStatus.OPTIMAL
        np.testing.assert_allclose(result.x, PRODUCTION_X, atol=1e-9)
        assert result.objective == pytest.approx(PRODUCTION_OPTIMUM)

    def test_strong_duality(self, production):
        result = solve_lp(production)
        assert result.dual_objective == pytest.approx(result.objective, abs=1e-8)

    def test_bland_rule_same_optimum(self, production):
        result = solve_lp(production, SolverConfig(pricing=PricingRule.BLAND))
        assert result.objective == pytest.approx(PRODUCTION_OPTIMUM)

    def test_upper_bounds(self):
        program = LinearProgram.from_rows(BOUNDED_OBJECTIVE, BOUNDED_ROWS, BOUNDED_BOUNDS)
        result = solve_lp(program)
        np.testing.assert_allclose(result.x, BOUNDED_X, atol=1e-9)
        assert result.objective == pytest.approx(BOUNDED_OPTIMUM)

    def test_equality_and_negative_lower_bound(self):
        program = LinearProgram.from_rows(FREE_OBJECTIVE, FREE_ROWS, FREE_BOUNDS)
        result = solve_lp(program)
        assert result.optimal
        assert result.objective == pytest.approx(FREE_OPTIMUM)

    def test_infeasible(self):
        program = LinearProgram.from_rows(INFEASIBLE_OBJECTIVE, INFEASIBLE_ROWS)
        result = solve_lp(program)
        assert result.status is SolveStatus.INFEASIBLE
        with pytest.raises(InfeasibleModelError) as info:
            result.require_optimal("test program")
        assert info.value.status is SolveStatus.INFEASIBLE

    def test_unbounded(self):
        program = LinearProgram.from_rows(UNBOUNDED_OBJECTIVE, UNBOUNDED_ROWS)
        assert solve_lp(program).status is SolveStatus.UNBOUNDED


class TestDualPath:
    def test_auto_picks_dual_for_scenario_programs(self, scenario_lp):
        assert solve_lp(scenario_lp).method == "dual"

    def test_primal_and_dual_agree(self, scenario_lp):
        primal = solve_lp(scenario_lp, SolverConfig(method=LpMethod.PRIMAL))
        dual = solve_lp(scenario_lp, SolverConfig(method=LpMethod.DUAL))
        assert primal.optimal and dual.optimal
        assert dual.objective == pytest.approx(primal.objective, abs=1e-8)
        assert scenario_lp.max_violation(dual.x) <= 1e-7

    def test_weak_duality(self, scenario_lp):
        result = solve_lp(scenario_lp, SolverConfig(method=LpMethod.PRIMAL))
        assert result.dual_objective <= result.objective + 1e-8

    def test_negative_cost_singletons_fill_slack(self):
        program = LinearProgram.from_rows(SLACK_SINGLETON_OBJECTIVE, SLACK_SINGLETON_ROWS)
        result = solve_lp(program)
        assert result.method == "dual"
        assert result.optimal
        np.testing.assert_allclose(result.x, SLACK_SINGLETON_X, atol=1e-9)
        assert result.objective == pytest.approx(SLACK_SINGLETON_OPTIMUM)
        assert result.dual_objective == pytest.approx(result.objective, abs=1e-7)

    def test_dual_and_primal_agree_on_slack_singletons(self):
        program = LinearProgram.from_rows(SLACK_SINGLETON_OBJECTIVE, SLACK_SINGLETON_ROWS)
        primal = solve_lp(program, SolverConfig(method=LpMethod.PRIMAL))
        dual = solve_lp(program, SolverConfig(method=LpMethod.DUAL))
        assert dual.objective == pytest.approx(primal.objective, abs=1e-9)

    def test_infeasible_dual_falls_back_to_primal(self):
        program = LinearProgram.from_rows(DUAL_INFEASIBLE_OBJECTIVE, DUAL_INFEASIBLE_ROWS)
        result = solve_lp(program, SolverConfig(method=LpMethod.DUAL))
        assert result.method == "primal"
        assert result.status is SolveStatus.UNBOUNDED

    def test_infeasible_dual_too_large_is_undecided(self):
        program = LinearProgram.from_rows(DUAL_INFEASIBLE_OBJECTIVE, DUAL_INFEASIBLE_ROWS)
        result = solve_lp(program, SolverConfig(method=LpMethod.DUAL, dense_limit=1))
        assert result.status is SolveStatus.INFEASIBLE_OR_UNBOUNDED
        assert not result.optimal


class TestSolveQp:
    def test_projection_onto_halfspace(self):
        qp = QuadraticProgram(
            hessian=PROJECTION_HESSIAN,
            linear=PROJECTION_LINEAR,
            matrix=[[1.0, 1.0]],
            relations=(Relation.LE,),
            rhs=[2.0],
        )
        result = solve_qp(qp)
        assert result.optimal
        np.testing.assert_allclose(result.x, PROJECTION_X, atol=1e-8)
        assert result.kkt_residual <= 1e-7

    def test_unconstrained_minimum_inside(self):
        qp = QuadraticProgram(
            hessian=PROJECTION_HESSIAN,
            linear=PROJECTION_LINEAR,
            matrix=[[1.0, 1.0]],
            relations=(Relation.LE,),
            rhs=[10.0],
        )
        np.testing.assert_allclose(solve_qp(qp).x, [1.0, 2.0], atol=1e-8)

    def test_not_psd(self):
        with pytest.raises(ValueError):
            QuadraticProgram(
                hessian=[[1.0, 0.0], [0.0, -1.0]],
                linear=[0.0, 0.0],
                matrix=[[1.0, 1.0]],
                relations=(Relation.LE,),
                rhs=[1.0],
            )

    def test_infeasible_constraints(self):
        qp = QuadraticProgram(
            hessian=PROJECTION_HESSIAN,
            linear=PROJECTION_LINEAR,
            matrix=[[1.0, 1.0]],
            relations=(Relation.LE,),
            rhs=[-1.0],
        )
        assert solve_qp(qp).status is SolveStatus.INFEASIBLE


class TestWriteLp:
    def test_sections(self, tmp_path):
        program = LinearProgram.from_rows(BOUNDED_OBJECTIVE, BOUNDED_ROWS, BOUNDED_BOUNDS)
        path = write_lp(program, tmp_path / "model.lp")
        text = path.read_text(encoding="utf-8")
        for section in ("Minimize", "Subject To", "Bounds", "End"):
            assert section in text
        assert "<= 4.0" in text
        assert "0.0 <= x1 <= 3.0" in text
