#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mfc/error.hpp"
#include "mfc/serialize.hpp"

namespace mfc::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Config, what); }

void allow_keys(const YAML::Node& node, const std::string& section, const std::set<std::string>& keys) {
    if (!node.IsMap()) bad("section '" + section + "' must be a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!keys.count(key)) bad("unknown key '" + key + "' in section '" + section + "'");
    }
}

template <class T>
T get(const YAML::Node& node, const std::string& name) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        bad("key '" + name + "' has an invalid value");
    }
}

template <class T>
void read_opt(const YAML::Node& parent, const char* key, T& out, const std::string& section) {
    if (parent[key]) out = get<T>(parent[key], section + "." + key);
}

// A point is either a scalar or a sequence of scalars.
Vec read_point(const YAML::Node& node, const std::string& name) {
    if (node.IsScalar()) return Vec{get<double>(node, name)};
    if (!node.IsSequence() || node.size() == 0) bad("'" + name + "' must be a number or a list of numbers");
    Vec v;
    for (const auto& x : node) v.push_back(get<double>(x, name));
    return v;
}

std::vector<Vec> read_points(const YAML::Node& node, const std::string& name) {
    if (!node.IsSequence()) bad("'" + name + "' must be a list");
    std::vector<Vec> out;
    for (const auto& p : node) out.push_back(read_point(p, name));
    return out;
}

void positive(double v, const std::string& name) {
    if (!(v > 0.0)) bad("'" + name + "' must be > 0");
}

}  // namespace

void refresh_build_hash(RunConfig& cfg) {
    std::ostringstream os;
    os << "model " << cfg.model_name << '\n';
    os << "beta " << (cfg.beta ? format_double(*cfg.beta) : "-") << '\n';
    os << "cells";
    for (int c : cfg.grid.cells) os << ' ' << c;
    os << "\nboundaries";
    for (const auto& b : cfg.grid.boundaries) {
        os << " [";
        for (double v : b) os << ' ' << format_double(v);
        os << " ]";
    }
    os << "\nrepresentatives";
    if (cfg.grid.representatives)
        for (const auto& r : *cfg.grid.representatives)
            for (double v : r) os << ' ' << format_double(v);
    os << "\natoms";
    for (const auto& a : cfg.action_atoms)
        for (double v : a) os << ' ' << format_double(v);
    os << "\nkind " << to_string(cfg.kind) << "\npopulation " << cfg.population;
    os << "\nscheme " << static_cast<int>(cfg.scheme.variant) << ' ' << cfg.scheme.samples_per_bin;
    os << "\nmc_samples " << cfg.mc_samples << "\nseed " << cfg.seed << '\n';
    cfg.build_hash = hash_hex(os.str());
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read config '" + path + "'");
    YAML::Node root;
    try {
        root = YAML::Load(in);
    } catch (const YAML::Exception& e) {
        bad("cannot parse '" + path + "': " + e.what());
    }
    if (!root.IsMap()) bad("config root must be a mapping");
    allow_keys(root, "root", {"seed", "threads", "model", "grid", "actions", "mdp", "solve", "simulate", "regret",
                              "check", "sweep"});

    RunConfig cfg;
    if (!root["seed"]) bad("'seed' is required");
    cfg.seed = get<std::uint64_t>(root["seed"], "seed");
    read_opt(root, "threads", cfg.threads, "root");
    if (cfg.threads < 1) bad("'threads' must be >= 1");

    const YAML::Node model = root["model"];
    if (!model) bad("section 'model' is required");
    allow_keys(model, "model", {"name", "beta"});
    if (!model["name"]) bad("'model.name' is required");
    cfg.model_name = get<std::string>(model["name"], "model.name");
    if (model["beta"]) cfg.beta = get<double>(model["beta"], "model.beta");
    if (cfg.beta && !(*cfg.beta > 0.0 && *cfg.beta < 1.0)) bad("'model.beta' must lie in (0,1)");

    if (const YAML::Node grid = root["grid"]) {
        allow_keys(grid, "grid", {"cells", "boundaries", "representatives"});
        if (grid["cells"] && grid["boundaries"]) bad("give either 'grid.cells' or 'grid.boundaries', not both");
        if (grid["cells"]) {
            const YAML::Node c = grid["cells"];
            if (c.IsScalar()) cfg.grid.cells = {get<int>(c, "grid.cells")};
            else cfg.grid.cells = get<std::vector<int>>(c, "grid.cells");
            for (int v : cfg.grid.cells)
                if (v < 1) bad("'grid.cells' entries must be >= 1");
        }
        if (grid["boundaries"]) {
            const YAML::Node b = grid["boundaries"];
            if (!b.IsSequence() || b.size() == 0) bad("'grid.boundaries' must be a non-empty list");
            // a flat list is one axis
            if (b[0].IsScalar()) cfg.grid.boundaries = {read_point(b, "grid.boundaries")};
            else cfg.grid.boundaries = read_points(b, "grid.boundaries");
        }
        if (grid["representatives"]) cfg.grid.representatives = read_points(grid["representatives"], "grid.representatives");
    }

    if (const YAML::Node actions = root["actions"]) {
        allow_keys(actions, "actions", {"atoms"});
        if (actions["atoms"]) cfg.action_atoms = read_points(actions["atoms"], "actions.atoms");
        if (actions["atoms"] && cfg.action_atoms.empty()) bad("'actions.atoms' must not be empty");
    }

    if (const YAML::Node mdp = root["mdp"]) {
        allow_keys(mdp, "mdp", {"kind", "population", "scheme", "samples_per_bin", "mc_samples"});
        if (mdp["kind"]) {
            try {
                cfg.kind = mdp_kind_from_string(get<std::string>(mdp["kind"], "mdp.kind"));
            } catch (const Error& e) {
                bad(e.what());
            }
        }
        read_opt(mdp, "population", cfg.population, "mdp");
        std::string scheme = "dirac";
        read_opt(mdp, "scheme", scheme, "mdp");
        int per_bin = 1;
        read_opt(mdp, "samples_per_bin", per_bin, "mdp");
        if (scheme == "dirac") cfg.scheme = WeightScheme::dirac();
        else if (scheme == "sampled-uniform") cfg.scheme = WeightScheme::sampled_uniform(per_bin);
        else bad("'mdp.scheme' must be 'dirac' or 'sampled-uniform'");
        if (per_bin < 1) bad("'mdp.samples_per_bin' must be >= 1");
        read_opt(mdp, "mc_samples", cfg.mc_samples, "mdp");
        if (cfg.mc_samples < 1) bad("'mdp.mc_samples' must be >= 1");
    }
    if (cfg.population < 1) bad("'mdp.population' must be >= 1");

    if (const YAML::Node solve = root["solve"]) {
        allow_keys(solve, "solve", {"tol", "max_iter"});
        read_opt(solve, "tol", cfg.tol, "solve");
        read_opt(solve, "max_iter", cfg.max_iter, "solve");
    }
    positive(cfg.tol, "solve.tol");
    if (cfg.max_iter < 1) bad("'solve.max_iter' must be >= 1");

    SimulateSpec& sim = cfg.simulate;
    if (const YAML::Node s = root["simulate"]) {
        allow_keys(s, "simulate", {"agents", "horizon", "truncation_tol", "rollouts", "feedback", "realization",
                                   "resample_each_step", "init", "trajectory_rollouts"});
        read_opt(s, "agents", sim.agents, "simulate");
        read_opt(s, "horizon", sim.horizon, "simulate");
        read_opt(s, "truncation_tol", sim.truncation_tol, "simulate");
        read_opt(s, "rollouts", sim.rollouts, "simulate");
        read_opt(s, "resample_each_step", sim.resample_each_step, "simulate");
        read_opt(s, "trajectory_rollouts", sim.trajectory_rollouts, "simulate");
        if (s["feedback"]) {
            try {
                sim.feedback = feedback_from_string(get<std::string>(s["feedback"], "simulate.feedback"));
            } catch (const Error& e) {
                bad(e.what());
            }
            sim.feedback_given = true;
        }
        if (s["realization"]) {
            const auto r = get<std::string>(s["realization"], "simulate.realization");
            if (r == "independent") sim.realization = Realization::Independent;
            else if (r == "coordinated") sim.realization = Realization::Coordinated;
            else bad("'simulate.realization' must be 'independent' or 'coordinated'");
        }
        if (s["init"]) sim.init = read_points(s["init"], "simulate.init");
    }
    if (sim.agents < 0 || sim.horizon < 0 || sim.rollouts < 1 || sim.trajectory_rollouts < 0)
        bad("'simulate' counts must be non-negative and rollouts >= 1");
    positive(sim.truncation_tol, "simulate.truncation_tol");

    if (const YAML::Node r = root["regret"]) {
        allow_keys(r, "regret", {"baseline", "baseline_tol", "reference_cells"});
        if (r["baseline"]) {
            const YAML::Node b = r["baseline"];
            const auto text = get<std::string>(b, "regret.baseline");
            if (text == "value") cfg.regret.baseline = RegretSpec::Baseline::Value;
            else if (text == "oracle") cfg.regret.baseline = RegretSpec::Baseline::Oracle;
            else {
                cfg.regret.baseline = RegretSpec::Baseline::Fixed;
                cfg.regret.fixed = get<double>(b, "regret.baseline");
            }
        }
        read_opt(r, "baseline_tol", cfg.regret.baseline_tol, "regret");
        read_opt(r, "reference_cells", cfg.regret.reference_cells, "regret");
        if (cfg.regret.baseline_tol < 0.0) bad("'regret.baseline_tol' must be >= 0");
        if (cfg.regret.reference_cells < 1) bad("'regret.reference_cells' must be >= 1");
    }

    if (const YAML::Node c = root["check"]) {
        allow_keys(c, "check", {"lipschitz_samples", "value_pairs", "oracle_max_agents", "oracle_tol"});
        read_opt(c, "lipschitz_samples", cfg.check.lipschitz_samples, "check");
        read_opt(c, "value_pairs", cfg.check.value_pairs, "check");
        read_opt(c, "oracle_max_agents", cfg.check.oracle_max_agents, "check");
        read_opt(c, "oracle_tol", cfg.check.oracle_tol, "check");
        if (cfg.check.lipschitz_samples < 2) bad("'check.lipschitz_samples' must be >= 2");
        positive(cfg.check.oracle_tol, "check.oracle_tol");
    }

    if (const YAML::Node s = root["sweep"]) {
        allow_keys(s, "sweep", {"search_resolution", "sampling_samples"});
        read_opt(s, "search_resolution", cfg.sweep.search_resolution, "sweep");
        read_opt(s, "sampling_samples", cfg.sweep.sampling_samples, "sweep");
        positive(cfg.sweep.search_resolution, "sweep.search_resolution");
        if (cfg.sweep.sampling_samples < 1) bad("'sweep.sampling_samples' must be >= 1");
    }

    // fail early on an unknown model name
    try {
        make_model(cfg.model_name);
    } catch (const Error& e) {
        bad(e.what());
    }
    refresh_build_hash(cfg);
    return cfg;
}

Resolved resolve(const RunConfig& cfg) {
    ModelBundle b = make_model(cfg.model_name);
    if (cfg.beta) b.model.beta = *cfg.beta;
    Resolved r{b.model, b.default_grid, b.default_actions};
    try {
        if (!cfg.grid.cells.empty()) {
            if (cfg.grid.cells.size() != b.model.state_bounds.dim())
                bad("'grid.cells' needs one entry per state dimension");
            r.grid = StateGrid::uniform(b.model.state_bounds, cfg.grid.cells);
        } else if (!cfg.grid.boundaries.empty()) {
            r.grid = StateGrid(cfg.grid.boundaries, cfg.grid.representatives);
        } else if (cfg.grid.representatives) {
            r.grid = StateGrid(b.default_grid.boundaries(), cfg.grid.representatives);
        }
        if (!cfg.action_atoms.empty()) r.actions = ActionGrid{cfg.action_atoms};
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) throw;
        bad(e.what());
    }
    return r;
}

McConfig mc_config(const RunConfig& cfg) {
    McConfig mc;
    mc.seed = cfg.seed;
    mc.samples = cfg.mc_samples;
    return mc;
}

}  // namespace mfc::cli
