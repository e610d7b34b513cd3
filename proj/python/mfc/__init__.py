"""Finite measure-valued MDPs for weakly coupled mean-field control."""

from ._core import (
    AgentPolicy,
    CostEstimate,
    Error,
    MDP,
    Model,
    SolveResult,
    StateGrid,
    bound_action,
    bound_discretization,
    bound_regret,
    bound_value_lipschitz,
    brute_force_oracle,
    build_aggregation_mdp,
    build_finite_population_mdp,
    build_sampling_mdp,
    count_PN,
    enumerate_PN,
    estimate_m_n,
    expected_sampling_error,
    model_names,
    nearest_empirical,
    num_threads,
    policy_evaluation,
    rank_PN,
    set_num_threads,
    to_agent_policy,
    value_iteration,
    w1_discrete,
)
from ._core import rollout_team as _rollout_team


def rollout_team(model, policy, init, horizon, rollouts, **kwargs):
    """Monte Carlo team cost; `init` holds one point per agent (scalars allowed in 1-D)."""
    points = [[float(p)] if isinstance(p, (int, float)) else [float(v) for v in p] for p in init]
    return _rollout_team(model, policy, points, horizon, rollouts, **kwargs)


__all__ = [name for name in dir() if not name.startswith("_")]
