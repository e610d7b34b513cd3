#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfc/grid.hpp"
#include "mfc/mdp.hpp"
#include "mfc/registry.hpp"
#include "mfc/simulate.hpp"

namespace mfc::cli {

struct GridSpec {
    std::vector<int> cells;               // per dimension, uniform over the state box
    std::vector<Vec> boundaries;          // explicit cut points per dimension
    std::optional<std::vector<Vec>> representatives;
};

struct SimulateSpec {
    int agents = 0;  // 0: the MDP population
    int horizon = 0;  // 0: derived from truncation_tol
    double truncation_tol = 1e-6;
    int rollouts = 1000;
    Feedback feedback = Feedback::FullMeasure;
    bool feedback_given = false;
    Realization realization = Realization::Independent;
    bool resample_each_step = true;
    std::vector<Vec> init;  // repeated cyclically up to `agents`
    int trajectory_rollouts = 0;
};

struct RegretSpec {
    enum class Baseline { Value, Oracle, Fixed };
    Baseline baseline = Baseline::Value;
    double fixed = 0.0;
    double baseline_tol = 0.0;
    int reference_cells = 64;  // oracle baseline grid
};

struct CheckSpec {
    int lipschitz_samples = 2000;
    int value_pairs = 500;
    int oracle_max_agents = 3;
    double oracle_tol = 1e-6;
};

struct SweepSpec {
    double search_resolution = 0.05;
    int sampling_samples = 2000;
};

/// Parsed run configuration. `build_hash` covers everything that shapes the
/// MDP (model, grid, actions, mdp section, seed) and is stamped on artifacts.
struct RunConfig {
    std::string model_name;
    std::optional<double> beta;
    GridSpec grid;
    std::vector<Vec> action_atoms;
    MdpKind kind = MdpKind::FinitePopulation;
    int population = 2;
    WeightScheme scheme;
    int mc_samples = 10'000;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    int max_iter = 100'000;
    int threads = 1;
    SimulateSpec simulate;
    RegretSpec regret;
    CheckSpec check;
    SweepSpec sweep;
    std::string build_hash;
};

/// Reads a YAML run config. Error(Config) on unknown keys, missing seed,
/// bad values; Error(Io) when the file cannot be read.
RunConfig load_config(const std::string& path);

/// Recomputes build_hash after command-line overrides.
void refresh_build_hash(RunConfig& cfg);

/// Model with the beta override applied, grid and action atoms from the
/// config or the built-in defaults.
struct Resolved {
    AgentModel model;
    StateGrid grid;
    ActionGrid actions;
};
Resolved resolve(const RunConfig& cfg);

McConfig mc_config(const RunConfig& cfg);

}  // namespace mfc::cli
