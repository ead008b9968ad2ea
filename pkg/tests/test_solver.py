"""Unit tests for the interval solver: formulas, state, variants, witness."""

import math

import numpy as np
import pytest

from curveopt.curve import CurveSpec
from curveopt.executor import BatchExecutor
from curveopt.objective import Objective, Trial, generate_grishagin, grishagin_objective
from curveopt.solver import (
    CharacteristicForm,
    ConfigError,
    MethodConfig,
    SolverError,
    SolverState,
    TrialBudgetExceeded,
    Variant,
    characteristics,
    convergence_witness,
    estimate_global_mu,
    estimate_local_mu,
    initialize,
    next_point,
    select_intervals,
    should_stop,
    solve,
)


def make_state(points, values) -> SolverState:
    trials = [Trial(float(x), np.array([float(x)]), float(z)) for x, z in zip(points, values)]
    return SolverState(trials)


def objective_1d(func, depth=16) -> Objective:
    return Objective(func, CurveSpec.unit(1, depth))


class TestMethodConfig:
    def test_defaults_are_valid(self):
        cfg = MethodConfig(variant=Variant.PLT)
        assert cfg.r == 2.9 and cfg.p == 1
        assert cfg.characteristic_form is CharacteristicForm.PROOF_FORM

    def test_accepts_lowercase_names(self):
        cfg = MethodConfig(variant="ialt", characteristic_form="paper_step3")
        assert cfg.variant is Variant.IALT
        assert cfg.characteristic_form is CharacteristicForm.PAPER_STEP3

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"r": 1.0},
            {"r": 0.5},
            {"xi": 0.0},
            {"epsilon": 0.0},
            {"epsilon": 1.0},
            {"p": 0},
            {"initial_internal_points": ()},
            {"initial_internal_points": (0.4, 0.2)},
            {"initial_internal_points": (0.2, 0.2)},
            {"initial_internal_points": (0.0, 0.5)},
            {"p": 6},
            {"max_trials": 3},
        ],
    )
    def test_rejects_bad_parameters(self, kwargs):
        with pytest.raises(ConfigError):
            MethodConfig(variant=Variant.PLT, **kwargs)

    @pytest.mark.parametrize("variant", [Variant.IA, Variant.IALT])
    def test_sequential_variants_require_single_batch(self, variant):
        with pytest.raises(ConfigError):
            MethodConfig(variant=variant, p=2)

    def test_epsilon_must_be_resolvable_at_depth(self):
        cfg = MethodConfig(variant=Variant.IALT, epsilon=1e-5)
        with pytest.raises(ConfigError):
            cfg.validate_against(CurveSpec.unit(2, 12))
        MethodConfig(variant=Variant.IALT).validate_against(CurveSpec.unit(2, 12))

    def test_variant_capabilities(self):
        assert Variant.IALT.uses_local_tuning and Variant.PLT.uses_local_tuning
        assert not Variant.IA.uses_local_tuning and not Variant.PIA.uses_local_tuning
        assert Variant.PIA.parallel_capable and Variant.PLT.parallel_capable
        assert not Variant.IA.parallel_capable and not Variant.IALT.parallel_capable


class TestSolverState:
    def test_orders_and_tracks_best(self):
        state = make_state([1.0, 0.0, 0.5], [1.0, 2.0, -1.0])
        assert list(state.xs) == [0.0, 0.5, 1.0]
        assert state.best.z == -1.0
        assert state.interval_count == 2

    def test_rejects_duplicate_coordinates(self):
        with pytest.raises(SolverError):
            make_state([0.0, 0.5, 0.5], [1.0, 2.0, 3.0])

    def test_insert_keeps_order_and_best(self):
        state = make_state([0.0, 1.0], [1.0, 2.0])
        state.insert(Trial(0.25, np.array([0.25]), -3.0))
        assert list(state.xs) == [0.0, 0.25, 1.0]
        assert state.best.z == -3.0
        with pytest.raises(SolverError):
            state.insert(Trial(0.25, np.array([0.25]), 0.0))


class TestInitialize:
    def test_default_layout(self):
        obj = grishagin_objective(generate_grishagin(1), depth=10)
        state = initialize(obj, MethodConfig(variant=Variant.IALT))
        assert list(state.xs) == [0.0, 0.2, 0.4, 0.6, 0.9, 1.0]
        assert obj.eval_count == 6
        assert state.iteration == 1

    def test_minimal_layout(self):
        obj = grishagin_objective(generate_grishagin(1), depth=10)
        state = initialize(obj, MethodConfig(variant=Variant.IALT, initial_internal_points=(0.5,)))
        assert len(state.trials) == 3
        assert state.interval_count == 2


class TestGlobalEstimate:
    def test_constant_function_gives_zero(self):
        assert estimate_global_mu(make_state([0.0, 0.3, 1.0], [2.0, 2.0, 2.0]), 1) == 0.0

    def test_hand_example_one_dimension(self):
        state = make_state([0.0, 0.5, 1.0], [1.0, 0.0, 1.0])
        assert estimate_global_mu(state, 1) == pytest.approx(2.0, rel=1e-12)

    def test_hand_example_two_dimensions(self):
        state = make_state([0.0, 1.0], [0.0, 5.0])
        assert estimate_global_mu(state, 2) == pytest.approx(5.0, rel=1e-12)


class TestLocalEstimate:
    def test_constant_function_floors_at_xi(self):
        state = make_state([0.0, 0.3, 1.0], [2.0, 2.0, 2.0])
        assert np.array_equal(estimate_local_mu(state, 1, 1e-6), [1e-6, 1e-6])

    def test_hand_example_symmetric_vee(self):
        state = make_state([0.0, 0.5, 1.0], [1.0, 0.0, 1.0])
        mu = estimate_local_mu(state, 1, 1e-6)
        assert mu == pytest.approx([2.0, 2.0], rel=1e-12)

    def test_hand_example_asymmetric_layout(self):
        state = make_state([0.0, 0.1, 1.0], [0.0, 0.5, 0.5])
        mu = estimate_local_mu(state, 1, 1e-6)
        # quotients {5, 0}; lambda = 5 for both; gamma = (5/9, 5)
        assert mu == pytest.approx([5.0, 5.0], rel=1e-12)

    def test_gamma_scales_global_information_by_interval_size(self):
        # spread quotients so the neighborhood maximum cannot mask gamma
        state = make_state([0.0, 0.4, 0.8, 1.0], [0.0, 4.0, 4.0, 4.4])
        mu = estimate_local_mu(state, 1, 1e-6)
        # global mu = 10 at the first interval; third interval is remote:
        # lambda_3 = max{0, 2} = 2, gamma_3 = 10 * 0.2 / 0.4 = 5
        assert mu[2] == pytest.approx(5.0, rel=1e-12)

    def test_floor_applies_everywhere(self):
        state = make_state([0.0, 0.5, 1.0], [0.0, 1e-9, 0.0])
        assert np.all(estimate_local_mu(state, 1, 1e-3) == 1e-3)


class TestCharacteristics:
    def test_flat_interval_reduces_to_scaled_mu(self):
        state = make_state([0.0, 0.5], [0.0, 0.0])
        rvals = characteristics(state, np.array([2.0]), 2.0, 1)
        assert rvals[0] == pytest.approx(2.0 * 2.0 * 0.5, rel=1e-12)

    def test_hand_example_proof_form(self):
        state = make_state([0.0, 0.5], [1.0, 0.0])
        rvals = characteristics(state, np.array([2.0]), 2.0, 1, CharacteristicForm.PROOF_FORM)
        assert rvals[0] == pytest.approx(0.5, rel=1e-12)

    def test_hand_example_step3_form(self):
        state = make_state([0.0, 0.5], [1.0, 0.0])
        rvals = characteristics(state, np.array([2.0]), 2.0, 1, CharacteristicForm.PAPER_STEP3)
        # same layout, endpoint sum weighted once instead of twice
        assert rvals[0] == pytest.approx(1.5, rel=1e-12)

    def test_constant_shift_moves_scores_but_not_argmax(self):
        state = make_state([0.0, 0.3, 1.0], [1.0, -1.0, 0.5])
        shifted = make_state([0.0, 0.3, 1.0], [4.0, 2.0, 3.5])
        mu = estimate_local_mu(state, 1, 1e-6)
        for form, weight in [(CharacteristicForm.PROOF_FORM, 2.0), (CharacteristicForm.PAPER_STEP3, 1.0)]:
            base = characteristics(state, mu, 2.9, 1, form)
            moved = characteristics(shifted, mu, 2.9, 1, form)
            assert moved == pytest.approx(base - 2.0 * weight * 3.0, rel=1e-9)
            assert np.argmax(moved) == np.argmax(base)


class TestSelectIntervals:
    def test_top_two(self):
        assert select_intervals(np.array([3.0, 1.0, 2.0]), 2) == [0, 2]

    def test_all_intervals(self):
        assert sorted(select_intervals(np.array([3.0, 1.0, 2.0]), 3)) == [0, 1, 2]

    def test_tie_breaks_to_lower_index(self):
        assert select_intervals(np.array([2.0, 2.0, 1.0]), 1) == [0]

    def test_rejects_oversized_selection(self):
        with pytest.raises(ConfigError):
            select_intervals(np.array([1.0, 2.0]), 3)


class TestNextPoint:
    def test_equal_values_give_midpoint(self):
        state = make_state([0.0, 0.5], [1.0, 1.0])
        state.mu = np.array([2.0])
        assert next_point(state, 0, 2.0, 1) == pytest.approx(0.25, abs=0)

    def test_hand_example(self):
        state = make_state([0.0, 0.5], [1.0, 0.0])
        state.mu = np.array([2.0])
        assert next_point(state, 0, 2.0, 1) == pytest.approx(0.375, rel=1e-12)

    def test_bias_flips_with_slope_sign(self):
        rising = make_state([0.0, 0.5], [0.0, 1.0])
        rising.mu = np.array([2.0])
        assert next_point(rising, 0, 2.0, 1) == pytest.approx(0.125, rel=1e-12)

    def test_point_always_interior(self):
        rng = np.random.default_rng(19)
        for _ in range(200):
            xs = np.sort(rng.uniform(0, 1, 3))
            if xs[1] - xs[0] < 1e-6 or xs[2] - xs[1] < 1e-6:
                continue
            state = make_state(xs, rng.uniform(-5, 5, 3))
            state.mu = estimate_local_mu(state, 1, 1e-6) * 1.5
            for t in (0, 1):
                x = next_point(state, t, 1.5, 1)
                assert state.xs[t] < x < state.xs[t + 1]
            assert state.escapes_clamped == 0


class TestShouldStop:
    def test_short_interval_triggers(self):
        state = make_state([0.0, 0.0005, 1.0], [0, 0, 0])
        assert should_stop(state, [0], 0.001, 1)
        assert not should_stop(state, [1], 0.001, 1)

    def test_exact_boundary_counts(self):
        state = make_state([0.0, 1e-6, 1.0], [0, 0, 0])
        assert should_stop(state, [0], 0.001, 2)

    def test_two_dimensional_threshold(self):
        state = make_state([0.0, 0.5, 1.0], [0, 0, 0])
        assert not should_stop(state, [0, 1], 0.001, 2)


class TestSolveSequential:
    def test_one_dimensional_parabola(self):
        obj = objective_1d(lambda y: (y[0] - 0.3) ** 2)
        report = solve(obj, MethodConfig(variant=Variant.IALT))
        assert abs(report.best_point[0] - 0.3) < 0.01
        assert report.best_value < 1e-4
        assert report.trials == obj.eval_count
        assert report.escapes_clamped == 0

    def test_global_variant_finds_same_basin(self):
        obj = objective_1d(lambda y: (y[0] - 0.3) ** 2)
        report = solve(obj, MethodConfig(variant=Variant.IA))
        assert abs(report.best_point[0] - 0.3) < 0.01

    def test_budget_abort_carries_partial_count(self):
        obj = objective_1d(lambda y: math.sin(20 * y[0]))
        with pytest.raises(TrialBudgetExceeded) as info:
            solve(obj, MethodConfig(variant=Variant.IALT, max_trials=10))
        assert info.value.trials_used <= 10
        assert info.value.trials_used == obj.eval_count

    def test_best_value_is_minimum_of_trials(self):
        obj = grishagin_objective(generate_grishagin(5))
        report = solve(obj, MethodConfig(variant=Variant.IALT))
        zs = [t.z for t in report.final_state.trials]
        assert report.best_value == min(zs)
        assert report.trials == len(zs)

    def test_stop_before_evaluate_saves_final_batch(self):
        fn = generate_grishagin(2)
        literal = solve(grishagin_objective(fn), MethodConfig(variant=Variant.IALT))
        early = solve(
            grishagin_objective(fn),
            MethodConfig(variant=Variant.IALT, stop_before_evaluate=True),
        )
        assert early.trials == literal.trials - 1
        assert early.best_value >= literal.best_value

    def test_wall_time_reported(self):
        obj = objective_1d(lambda y: (y[0] - 0.5) ** 2)
        report = solve(obj, MethodConfig(variant=Variant.IA))
        assert report.wall_millis > 0


class TestSolveParallel:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_plt_p1_matches_ialt_bitwise(self, seed):
        fn = generate_grishagin(seed)
        a = solve(grishagin_objective(fn), MethodConfig(variant=Variant.IALT))
        b = solve(grishagin_objective(fn), MethodConfig(variant=Variant.PLT, p=1))
        assert [t.x for t in a.final_state.trials] == [t.x for t in b.final_state.trials]
        assert [t.z for t in a.final_state.trials] == [t.z for t in b.final_state.trials]

    @pytest.mark.parametrize("seed", [1, 2])
    def test_pia_p1_matches_ia_bitwise(self, seed):
        fn = generate_grishagin(seed)
        a = solve(grishagin_objective(fn), MethodConfig(variant=Variant.IA))
        b = solve(grishagin_objective(fn), MethodConfig(variant=Variant.PIA, p=1))
        assert [t.x for t in a.final_state.trials] == [t.x for t in b.final_state.trials]

    def test_batch_width_grows_trials_per_iteration(self):
        fn = generate_grishagin(3)
        report = solve(grishagin_objective(fn), MethodConfig(variant=Variant.PLT, p=4))
        # 6 initial trials, then 4 per completed iteration
        assert report.trials == 6 + 4 * (report.iterations - 1)

    def test_worker_count_does_not_change_trials(self):
        fn = generate_grishagin(4)
        reports = []
        for workers in (1, 3):
            with BatchExecutor(workers=workers) as ex:
                reports.append(solve(grishagin_objective(fn), MethodConfig(variant=Variant.PIA, p=3), executor=ex))
        xs = [[t.x for t in rep.final_state.trials] for rep in reports]
        assert xs[0] == xs[1]


class TestConvergenceWitness:
    def test_hand_example(self):
        state = make_state([0.0, 1.0], [1.0, 2.0])
        state.mu = np.array([4.0])
        w = convergence_witness(state, 0.5, 0.0, 1, 2.0)
        assert w.endpoint_quotient == pytest.approx(4.0, rel=1e-12)
        assert w.interval_quotient == pytest.approx(1.0, rel=1e-12)
        assert w.rhs == pytest.approx(4.0 + math.sqrt(15.0), rel=1e-12)
        assert w.lhs == pytest.approx(8.0, rel=1e-12)
        assert w.satisfied and not w.degenerate and not w.at_node

    def test_insufficient_estimate_fails_condition(self):
        state = make_state([0.0, 1.0], [1.0, 2.0])
        state.mu = np.array([1.0])
        w = convergence_witness(state, 0.5, 0.0, 1, 2.0)
        assert w.lhs == pytest.approx(2.0)
        assert not w.satisfied

    def test_at_node_is_trivially_satisfied(self):
        state = make_state([0.0, 0.5, 1.0], [1.0, 0.0, 1.0])
        state.mu = estimate_local_mu(state, 1, 1e-6)
        w = convergence_witness(state, 0.5, 0.0, 1, 2.9)
        assert w.at_node and w.satisfied

    def test_flat_interval_at_target_value_is_satisfied(self):
        # f* equal to both endpoint values: K = M = 0, rhs collapses to 0
        state = make_state([0.0, 1.0], [1.0, 1.0])
        state.mu = np.array([5.0])
        w = convergence_witness(state, 0.5, 1.0, 1, 2.0)
        assert w.endpoint_quotient == 0.0 and w.interval_quotient == 0.0
        assert w.rhs == 0.0 and w.satisfied

    def test_degenerate_branch_flags_negative_discriminant(self):
        # a target value above an endpoint makes K < M, so the root term
        # goes imaginary and only the base comparison remains
        state = make_state([0.0, 1.0], [0.0, 0.5])
        state.mu = np.array([5.0])
        w = convergence_witness(state, 0.5, 0.4, 1, 2.0)
        assert w.degenerate
        assert w.endpoint_quotient == pytest.approx(0.2, rel=1e-12)
        assert w.interval_quotient == pytest.approx(0.5, rel=1e-12)
        assert w.rhs == pytest.approx(0.2, rel=1e-12)
        assert w.satisfied

    def test_requires_fresh_estimates(self):
        state = make_state([0.0, 1.0], [1.0, 2.0])
        with pytest.raises(SolverError):
            convergence_witness(state, 0.5, 0.0, 1, 2.0)

    def test_rejects_out_of_range_target(self):
        state = make_state([0.0, 1.0], [1.0, 2.0])
        state.mu = np.array([4.0])
        with pytest.raises(ValueError):
            convergence_witness(state, 1.5, 0.0, 1, 2.0)


class TestRunReport:
    def test_wire_schema(self):
        fn = generate_grishagin(1)
        report = solve(grishagin_objective(fn), MethodConfig(variant=Variant.IALT))
        report.seed = 1
        report.success = True
        doc = report.to_json()
        assert sorted(doc) == sorted(
            [
                "variant", "seed", "r", "xi", "epsilon", "p", "depth", "trials",
                "iterations", "best_value", "best_point", "success",
                "wall_millis", "escapes_clamped",
            ]
        )
        assert doc["variant"] == "IALT"
        assert doc["depth"] == 12
        assert isinstance(doc["best_point"], list) and len(doc["best_point"]) == 2
