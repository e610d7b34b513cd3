import math

import numpy as np
import pytest

import mfc


def test_builtin_models_are_listed():
    assert {"crowd-1d", "switch-2state", "ladder-3state", "paper-example"} <= set(mfc.model_names())
    with pytest.raises(mfc.Error):
        mfc.Model("no-such-model")


def test_measure_helpers():
    assert mfc.count_PN(3, 2) == 6
    space = mfc.enumerate_PN(2, 2)
    assert space == [[2, 0], [1, 1], [0, 2]]
    assert [mfc.rank_PN(c) for c in space] == [0, 1, 2]
    assert mfc.w1_discrete([1.0, 0.0], [0.0, 1.0]) == 2.0
    assert mfc.nearest_empirical([0.7, 0.3], 2) == [1, 1]


def test_switch_pipeline_matches_oracle():
    model = mfc.Model("switch-2state")
    mdp = mfc.build_finite_population_mdp(model, 2)
    assert mdp.num_states == 3
    assert mdp.kind == "finite-population"
    mdp.check_stochastic()
    result = mfc.value_iteration(mdp, tol=1e-10)
    assert result.converged
    assert result.max_gap_ratio <= model.beta + 1e-12
    oracle = mfc.brute_force_oracle(model, 2, tol=1e-10)
    np.testing.assert_allclose(oracle["measure_values"], result.values, atol=1e-9)
    assert oracle["max_permutation_spread"] < 1e-12


def test_mdp_text_round_trip():
    model = mfc.Model("crowd-1d")
    mdp = mfc.build_aggregation_mdp(model, 2, grid=mfc.StateGrid.uniform([0.0], [1.0], [3]))
    text = mdp.to_text()
    again = mfc.MDP.from_text(text)
    assert again.to_text() == text
    nxt, prob = mdp.kernel_row(0, 0)
    assert math.isclose(sum(prob), 1.0, abs_tol=1e-12)


def test_rollout_of_constant_rule_is_deterministic_across_threads():
    model = mfc.Model("crowd-1d")
    mdp = mfc.build_finite_population_mdp(model, 2)
    policy = mfc.to_agent_policy(mdp, mfc.value_iteration(mdp))
    assert policy.num_states == mdp.num_states
    mfc.set_num_threads(1)
    a = mfc.rollout_team(model, policy, [0.1, 0.9], horizon=20, rollouts=64, seed=3)
    mfc.set_num_threads(4)
    b = mfc.rollout_team(model, policy, [0.1, 0.9], horizon=20, rollouts=64, seed=3)
    mfc.set_num_threads(1)
    np.testing.assert_array_equal(a.per_rollout, b.per_rollout)
    assert a.std_error > 0.0


def test_bounds_and_contraction():
    assert math.isclose(mfc.bound_value_lipschitz(1.0, 1.0, 0.25), 4.0)
    with pytest.raises(mfc.Error):
        mfc.bound_regret(1.0, 1.0, 0.5, 0.1)
    model = mfc.Model("switch-2state")
    value, ok = model.contraction()
    assert ok and math.isclose(value, 0.9)
    model.beta = 0.6
    assert not model.contraction()[1]


def test_rounding_error_shrinks_with_n():
    values = [mfc.estimate_m_n(2, n, 0.01) for n in (1, 2, 4, 8)]
    assert values == sorted(values, reverse=True)
    mean, se = mfc.expected_sampling_error([0.0, 1.0], 5, 100, seed=1)
    assert mean == 0.0 and se == 0.0
