#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mfc/grid.hpp"
#include "mfc/measures.hpp"
#include "mfc/model.hpp"
#include "mfc/solver.hpp"

namespace mfc {

enum class Feedback { FullMeasure, Aggregated, Sampled };
const char* to_string(Feedback f);
Feedback feedback_from_string(const std::string& s);

/// How agents turn the agent rule into actions.
/// Independent: each agent draws from gamma(.|cell, state) on its own.
/// Coordinated: within each cell the rule's counts are realized exactly
/// (count * gamma agents per action, assigned to a random subset), which
/// reproduces the joint action chosen by the finite-population model.
enum class Realization { Independent, Coordinated };

struct RolloutConfig {
    int agents = 1;      // N
    int horizon = 1;     // T
    int rollouts = 1;    // R
    std::uint64_t seed = 0;
    Feedback feedback = Feedback::FullMeasure;
    int feedback_n = 0;  // n for the aggregated and sampled channels
    /// Sampled channel: redraw the observed agents every step (default) or
    /// keep the ones drawn at t = 0.
    bool resample_each_step = true;
    Realization realization = Realization::Independent;
    /// Sup of |c| used for the truncation bound; estimated from the grid
    /// representatives when absent.
    std::optional<double> cost_sup;
};

struct CostEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double truncation_bound = 0.0;
    std::vector<double> per_rollout;
};

/// Sampled sup of |c(x_i, u_k, mu)| over representatives, action atoms and
/// the Dirac and uniform measures on the representatives.
double estimate_cost_sup(const AgentModel& model, const StateGrid& grid,
                         const ActionGrid& action_grid);

/// Smallest T with beta^T * cost_sup / (1 - beta) <= tol.
int horizon_for_tolerance(double beta, double cost_sup, double tol);

/// Optional per-step trajectory sink: CSV rows t,rollout,agent,state...,action...,cost.
struct TrajectorySink {
    std::ostream* out = nullptr;
    int max_rollouts = 1;
};

/// Monte Carlo estimate of the discounted team cost of `policy` in the
/// original continuous-state system. Error(UnreachableState) when the
/// feedback measure has no policy entry.
CostEstimate rollout_team(const AgentModel& model, const StateGrid& grid,
                          const ActionGrid& action_grid, const AgentPolicy& policy,
                          const PointCloudMeasure& init, const RolloutConfig& cfg,
                          TrajectorySink trajectory = {});

struct OracleResult {
    /// Values over vector states of cell indices, base-M little-endian index.
    std::vector<double> vector_values;
    /// Values over enumerate_PN(M, N) states.
    std::vector<double> measure_values;
    /// Largest spread of vector values within one distribution.
    double max_permutation_spread = 0.0;
    int iterations = 0;
    std::size_t num_cells = 0;
    int agents = 0;
};

/// Default cap on |X|^N * |U|^N for the centralized oracle.
inline constexpr std::uint64_t kOracleCap = 10'000'000;

/// Centralized value iteration over vector states in X_hat^N with joint
/// actions in U_hat^N, agents moving by phi(f(x_hat, u, mu, w_i, w_0)).
/// Requires finite noise. Reduces to distributions by checking that values
/// are constant across permutations. Error(CapExceeded), Error(InvalidArgument).
OracleResult brute_force_oracle(const AgentModel& model, const StateGrid& grid,
                                const ActionGrid& action_grid, int N, double beta, double tol,
                                std::uint64_t cap = kOracleCap);

/// Index of a vector state (cell per agent) in OracleResult::vector_values.
std::size_t oracle_vector_index(std::span<const std::size_t> cells, std::size_t num_cells);

struct RegretReport {
    CostEstimate estimate;
    double baseline = 0.0;
    double regret = 0.0;
    /// 3 * std_error + truncation bound + baseline tolerance.
    double tolerance = 0.0;
};

RegretReport regret(const AgentModel& model, const StateGrid& grid, const ActionGrid& action_grid,
                    const AgentPolicy& policy, const PointCloudMeasure& init,
                    const RolloutConfig& cfg, double baseline, double baseline_tol);

}  // namespace mfc
