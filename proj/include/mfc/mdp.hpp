#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mfc/grid.hpp"
#include "mfc/measures.hpp"
#include "mfc/model.hpp"

namespace mfc {

/// Symmetric agent rule gamma(u | cell) with probabilities numerator/denominator.
/// Rows of cells that are empty in the state it belongs to are all-zero and
/// read as uniform.
struct AgentRule {
    std::size_t num_cells = 0;
    std::size_t num_actions = 0;
    int denominator = 1;
    std::vector<int> numerators;  // row-major [cell][action]

    double prob(std::size_t cell, std::size_t action) const;
    ConditionalKernel kernel() const;
    friend bool operator==(const AgentRule&, const AgentRule&) = default;
};

using MeasureAction = std::variant<JointEmpiricalMeasure, AgentRule>;

/// Conditional kernel of an action: disintegration for joint measures, the
/// stored probabilities for agent rules.
ConditionalKernel action_kernel(const MeasureAction& action);

/// Sparse probability row over MDP states, indices strictly increasing.
struct KernelRow {
    std::vector<std::uint32_t> next;
    std::vector<double> prob;

    std::size_t size() const { return next.size(); }
    double sum() const;
};

enum class MdpKind { FinitePopulation, Aggregation, Sampling };
const char* to_string(MdpKind kind);
MdpKind mdp_kind_from_string(const std::string& s);

struct WeightScheme {
    enum class Variant { DiracAtRepresentatives, SampledUniformInBins };
    Variant variant = Variant::DiracAtRepresentatives;
    int samples_per_bin = 1;

    static WeightScheme dirac() { return {}; }
    static WeightScheme sampled_uniform(int samples) {
        return {Variant::SampledUniformInBins, samples};
    }
};

/// Monte Carlo settings used wherever a noise source has no finite support.
struct McConfig {
    std::uint64_t seed = 0;
    int samples = 10'000;
    std::uint64_t cap = kDefaultEnumerationCap;
};

struct BuildMeta {
    MdpKind kind = MdpKind::FinitePopulation;
    std::string model_name;
    int population = 0;  // N for the finite-population model, n for the others
    std::size_t num_cells = 0;
    std::size_t num_actions = 0;
    std::vector<Vec> representatives;
    std::vector<Vec> action_atoms;
    WeightScheme scheme;
    std::uint64_t seed = 0;
    int mc_samples = 0;
    bool exact = true;  // false when any kernel row used Monte Carlo
    std::string rule_resolution;  // e.g. "1/4" for the agent-rule grid
    std::string config_hash;
};

/// Finite MDP over empirical measures. actions[s][a] pairs with cost[s][a]
/// and kernel[s][a].
struct FiniteMeasureMDP {
    std::vector<EmpiricalMeasure> states;
    std::vector<std::vector<MeasureAction>> actions;
    std::vector<std::vector<double>> cost;
    std::vector<std::vector<KernelRow>> kernel;
    double beta = 0.5;
    BuildMeta meta;

    std::size_t num_states() const { return states.size(); }
    std::size_t num_actions(std::size_t s) const { return actions[s].size(); }
    std::size_t state_index(const EmpiricalMeasure& mu) const;
    double cost_sup() const;
    /// Throws Error(NonStochasticKernel) naming the first (state, action)
    /// whose row has a negative entry or does not sum to 1 within tol.
    void check_stochastic(double tol = 1e-9) const;
};

/// Threshold below which kernel entries are pruned before renormalizing.
inline constexpr double kPruneThreshold = 1e-12;

/// Distribution of the next empirical measure when agents at `points` take
/// action atoms `actions[i]`, as a dense vector in enumerate_PN(M, N) order.
/// Exact when both noises have finite support (per-agent next-cell laws are
/// convolved in agent order), Monte Carlo with `mc` otherwise.
std::vector<double> cloud_measure_kernel(const AgentModel& model, const StateGrid& grid,
                                         const ActionGrid& action_grid,
                                         std::span<const Vec> points,
                                         std::span<const std::size_t> actions,
                                         const McConfig& mc, std::uint64_t stream_key = 0,
                                         bool* used_mc = nullptr);

/// cloud_measure_kernel evaluated at the representative cloud of (mu, theta).
/// Error(InvalidAction) when theta's marginal differs from mu.
std::vector<double> exact_measure_kernel(const AgentModel& model, const StateGrid& grid,
                                         const ActionGrid& action_grid,
                                         const EmpiricalMeasure& mu,
                                         const JointEmpiricalMeasure& theta,
                                         const McConfig& mc = {});

/// k(mu, Theta) = (1/N) sum_i c(x^i, u^i, mu) for an explicit cloud.
double cloud_stage_cost(const AgentModel& model, const ActionGrid& action_grid,
                        std::span<const Vec> points, std::span<const std::size_t> actions);

FiniteMeasureMDP build_finite_population_mdp(const AgentModel& model, const StateGrid& grid,
                                             const ActionGrid& action_grid, int N,
                                             const WeightScheme& scheme = {},
                                             const McConfig& mc = {});

/// Cell-to-cell transition matrix T(i -> j | cell i, action k, mu_hat, w0)
/// for one common-noise value, row-major [cell][action][next cell].
std::vector<double> cell_transitions(const AgentModel& model, const StateGrid& grid,
                                     const ActionGrid& action_grid, const SimplexMeasure& mu,
                                     const Vec& w_common, const McConfig& mc,
                                     std::uint64_t stream_key = 0, bool* used_mc = nullptr);

/// One step of the discretized infinite-population flow for common noise w0.
SimplexMeasure measure_flow(const AgentModel& model, const StateGrid& grid,
                            const ActionGrid& action_grid, const SimplexMeasure& mu,
                            const ConditionalKernel& gamma, const Vec& w_common,
                            const McConfig& mc = {});

/// All agent rules on the occupied cells of mu with probabilities in
/// multiples of 1/n. Error(CapExceeded).
std::vector<AgentRule> enumerate_agent_rules(const EmpiricalMeasure& mu, std::size_t num_actions,
                                             int n, std::uint64_t cap = kDefaultEnumerationCap);

/// sum_{j,k} c(x_j, u_k, mu) gamma(u_k | x_j) mu(x_j).
double rule_stage_cost(const AgentModel& model, const StateGrid& grid,
                       const ActionGrid& action_grid, const SimplexMeasure& mu,
                       const ConditionalKernel& gamma);

FiniteMeasureMDP build_aggregation_mdp(const AgentModel& model, const StateGrid& grid,
                                       const ActionGrid& action_grid, int n,
                                       const McConfig& mc = {});

FiniteMeasureMDP build_sampling_mdp(const AgentModel& model, const StateGrid& grid,
                                    const ActionGrid& action_grid, int n,
                                    const McConfig& mc = {});

/// Probability of drawing count vector `counts` in sum(counts) i.i.d. draws from nu.
double multinomial_probability(std::span<const int> counts, std::span<const double> nu);

}  // namespace mfc
