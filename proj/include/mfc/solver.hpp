#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mfc/mdp.hpp"

namespace mfc {

struct ValueFunction {
    std::vector<double> values;
};

struct MeasurePolicy {
    std::vector<std::size_t> choice;  // per state, index into its action list
};

/// Symmetric agent rule per measure state: probs[state][cell][action].
struct AgentPolicy {
    MdpKind kind = MdpKind::FinitePopulation;
    int population = 0;
    std::size_t num_cells = 0;
    std::size_t num_actions = 0;
    std::vector<double> probs;

    std::size_t num_states() const {
        return num_cells * num_actions == 0 ? 0 : probs.size() / (num_cells * num_actions);
    }
    std::span<const double> rule(std::size_t state, std::size_t cell) const {
        return {probs.data() + (state * num_cells + cell) * num_actions, num_actions};
    }
};

struct SolveResult {
    ValueFunction value;
    MeasurePolicy policy;
    int iterations = 0;
    bool converged = false;
    /// Sup-norm update gap of every sweep, in order.
    std::vector<double> gaps;
};

struct SolveOptions {
    double tol = 1e-8;
    int max_iter = 100'000;
};

/// Synchronous value iteration from v = 0. Stops once the sweep gap is at
/// most tol (1 - beta) / beta, which bounds the distance to the fixed point
/// by tol. Argmin ties go to the lowest action index.
/// Error(NonStochasticKernel) on a bad row, Error(InvalidArgument) on tol <= 0.
SolveResult value_iteration(const FiniteMeasureMDP& mdp, const SolveOptions& options = {});

/// Fixed point of the Bellman operator of `policy`, to sup-norm tolerance tol.
ValueFunction policy_evaluation(const FiniteMeasureMDP& mdp, const MeasurePolicy& policy,
                                double tol = 1e-8, int max_iter = 100'000);

/// Greedy policy with respect to `values` (lowest-index ties).
MeasurePolicy greedy_policy(const FiniteMeasureMDP& mdp, const ValueFunction& values);

/// Disintegrates each chosen joint action; agent rules pass through.
AgentPolicy to_agent_policy(const FiniteMeasureMDP& mdp, const MeasurePolicy& policy);

/// Largest ratio gaps[k+1] / gaps[k] over consecutive nonzero gaps.
double max_gap_ratio(const std::vector<double>& gaps);

}  // namespace mfc
