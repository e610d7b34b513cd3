#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "config.hpp"
#include "mfc/diagnostics.hpp"
#include "mfc/error.hpp"
#include "mfc/lipschitz.hpp"
#include "mfc/parallel.hpp"
#include "mfc/serialize.hpp"
#include "mfc/simulate.hpp"
#include "mfc/solver.hpp"

namespace mfc::cli {

namespace {

namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRowTol = 1e-9;
constexpr double kGapSlack = 1e-12;
constexpr std::uint64_t kReferenceCap = 1'000'000;

std::string fmt(double v) { return format_double(v); }

RunConfig load(const Options& o) {
    if (o.config.empty()) throw Error(ErrorKind::Config, "--config is required");
    RunConfig cfg = load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.tol) {
        if (!(*o.tol > 0.0)) throw Error(ErrorKind::Config, "--tol must be > 0");
        cfg.tol = *o.tol;
    }
    refresh_build_hash(cfg);
    const int threads = o.threads ? *o.threads : cfg.threads;
    if (threads < 1) throw Error(ErrorKind::Config, "--threads must be >= 1");
    set_num_threads(threads);
    return cfg;
}

fs::path out_dir(const Options& o) {
    std::error_code ec;
    fs::create_directories(o.out, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + o.out + "': " + ec.message());
    return o.out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text) || !f.flush()) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot read '" + path.string() + "'");
    return f;
}

FiniteMeasureMDP read_mdp_file(const fs::path& path) {
    auto f = open_in(path);
    return read_mdp(f);
}

FiniteMeasureMDP build(const RunConfig& cfg, const Resolved& r) {
    FiniteMeasureMDP mdp;
    switch (cfg.kind) {
        case MdpKind::FinitePopulation:
            mdp = build_finite_population_mdp(r.model, r.grid, r.actions, cfg.population, cfg.scheme, mc_config(cfg));
            break;
        case MdpKind::Aggregation:
            mdp = build_aggregation_mdp(r.model, r.grid, r.actions, cfg.population, mc_config(cfg));
            break;
        case MdpKind::Sampling:
            mdp = build_sampling_mdp(r.model, r.grid, r.actions, cfg.population, mc_config(cfg));
            break;
    }
    mdp.meta.config_hash = cfg.build_hash;
    return mdp;
}

PolicyFile policy_file(const FiniteMeasureMDP& mdp, const MeasurePolicy& policy) {
    return {mdp.meta.config_hash,
            grid_signature(mdp.meta.representatives, mdp.meta.action_atoms, mdp.meta.population),
            to_agent_policy(mdp, policy)};
}

// Loads a policy and rejects it unless it was computed for this config's grid.
AgentPolicy load_policy(const Options& o, const RunConfig& cfg, const Resolved& r) {
    const fs::path path = o.policy.empty() ? fs::path(o.out) / "policy.txt" : fs::path(o.policy);
    auto f = open_in(path);
    const PolicyFile file = read_policy(f);
    const std::string expected = grid_signature(r.grid.representatives(), r.actions.atoms, cfg.population);
    if (file.grid_signature != expected)
        throw Error(ErrorKind::ArtifactMismatch, "policy grid signature " + file.grid_signature +
                                                     " does not match the config grid " + expected);
    if (!file.config_hash.empty() && file.config_hash != cfg.build_hash)
        throw Error(ErrorKind::ArtifactMismatch, "policy was built from config " + file.config_hash +
                                                     ", current config is " + cfg.build_hash);
    if (file.policy.kind != cfg.kind)
        throw Error(ErrorKind::ArtifactMismatch, std::string("policy kind ") + to_string(file.policy.kind) +
                                                     " does not match the config kind " + to_string(cfg.kind));
    return file.policy;
}

struct Rollout {
    RolloutConfig rc;
    PointCloudMeasure init;
};

Rollout rollout_setup(const RunConfig& cfg, const Resolved& r) {
    const SimulateSpec& sim = cfg.simulate;
    Rollout out;
    RolloutConfig& rc = out.rc;
    rc.agents = sim.agents > 0 ? sim.agents : cfg.population;
    rc.rollouts = sim.rollouts;
    rc.seed = cfg.seed;
    rc.feedback_n = cfg.population;
    if (sim.feedback_given) rc.feedback = sim.feedback;
    else if (cfg.kind == MdpKind::Aggregation) rc.feedback = Feedback::Aggregated;
    else if (cfg.kind == MdpKind::Sampling) rc.feedback = Feedback::Sampled;
    else rc.feedback = Feedback::FullMeasure;
    rc.resample_each_step = sim.resample_each_step;
    rc.realization = sim.realization;
    rc.cost_sup = estimate_cost_sup(r.model, r.grid, r.actions);
    rc.horizon = sim.horizon > 0 ? sim.horizon : horizon_for_tolerance(r.model.beta, *rc.cost_sup, sim.truncation_tol);
    const std::vector<Vec>& src = sim.init.empty() ? r.grid.representatives() : sim.init;
    for (int i = 0; i < rc.agents; ++i) out.init.points.push_back(src[static_cast<std::size_t>(i) % src.size()]);
    return out;
}

struct Baseline {
    double value = 0.0;
    double tol = 0.0;
};

double bound_or_nan(const AgentModel& m, double (*bound)(double, double, double, double), double L) {
    return validate_contraction(m).ok ? bound(m.K_c, m.K_f, m.beta, L) : kNaN;
}

// Value of the solved MDP at the state the initial cloud maps to.
double value_at_init(const FiniteMeasureMDP& mdp, const SolveResult& sol, const StateGrid& grid,
                     const PointCloudMeasure& init) {
    const EmpiricalMeasure counts = project_to_grid(init, grid);
    if (mdp.meta.kind == MdpKind::FinitePopulation) {
        if (counts.total != mdp.meta.population)
            throw Error(ErrorKind::Config, "the value baseline needs simulate.agents equal to mdp.population");
        return sol.value.values[mdp.state_index(counts)];
    }
    const auto space = enumerate_PN(grid.size(), mdp.meta.population);
    return sol.value.values[nearest_empirical_index(counts.weights(), space)];
}

Baseline oracle_baseline(const RunConfig& cfg, const Resolved& r, const Rollout& ro) {
    std::vector<int> cells(r.model.state_bounds.dim(), cfg.regret.reference_cells);
    const StateGrid ref = StateGrid::uniform(r.model.state_bounds, cells);
    const OracleResult oracle = brute_force_oracle(r.model, ref, r.actions, ro.rc.agents, r.model.beta, cfg.tol);
    std::vector<std::size_t> idx;
    for (const auto& p : ro.init.points) idx.push_back(ref.quantize(p));
    Baseline b;
    b.value = oracle.vector_values[oracle_vector_index(idx, ref.size())];
    b.tol = cfg.regret.baseline_tol;
    const double disc = bound_or_nan(r.model, bound_discretization, ref.L_X());
    if (!std::isnan(disc)) b.tol += disc;
    return b;
}

struct RegretRow {
    RegretReport rep;
    double bound = kNaN;
    int horizon = 0;
    int agents = 0;
};

RegretRow run_regret(const Resolved& r, const AgentPolicy& policy, const Rollout& ro,
                     const Baseline& b) {
    RegretRow row;
    row.rep = regret(r.model, r.grid, r.actions, policy, ro.init, ro.rc, b.value, b.tol);
    row.bound = bound_or_nan(r.model, bound_regret, r.grid.L_X());
    row.horizon = ro.rc.horizon;
    row.agents = ro.rc.agents;
    return row;
}

// Baseline per the config; `mdp`/`sol` serve the value mode.
Baseline make_baseline(const RunConfig& cfg, const Resolved& r, const Rollout& ro, const FiniteMeasureMDP& mdp,
                       const SolveResult& sol) {
    switch (cfg.regret.baseline) {
        case RegretSpec::Baseline::Fixed: return {cfg.regret.fixed, cfg.regret.baseline_tol};
        case RegretSpec::Baseline::Oracle: return oracle_baseline(cfg, r, ro);
        case RegretSpec::Baseline::Value: break;
    }
    return {value_at_init(mdp, sol, r.grid, ro.init), cfg.regret.baseline_tol + cfg.tol};
}

SolveResult solve(const FiniteMeasureMDP& mdp, const RunConfig& cfg) {
    return value_iteration(mdp, {cfg.tol, cfg.max_iter});
}

std::vector<int> parse_values(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        const std::string tok = item.substr(b, e - b + 1);
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || v < 1) throw Error(ErrorKind::Config, "sweep value '" + tok + "' is not a positive integer");
        out.push_back(v);
    }
    if (out.empty()) throw Error(ErrorKind::Config, "sweep needs at least one value in --values");
    return out;
}

class Report {
public:
    void pass(const std::string& name, const std::string& detail) { line("PASS", name, detail); }
    void fail(const std::string& name, const std::string& detail) {
        line("FAIL", name, detail);
        failed_ = true;
    }
    void skip(const std::string& name, const std::string& detail) { line("SKIP", name, detail); }
    void warn(const std::string& name, const std::string& detail) { line("WARN", name, detail); }
    void check(bool ok, const std::string& name, const std::string& detail) { ok ? pass(name, detail) : fail(name, detail); }
    void record(const BoundReport& b) { reports_.push_back(b); }
    bool failed() const { return failed_; }
    const std::vector<BoundReport>& reports() const { return reports_; }

private:
    static void line(const char* tag, const std::string& name, const std::string& detail) {
        std::cout << tag << ' ' << name << ": " << detail << '\n';
    }
    bool failed_ = false;
    std::vector<BoundReport> reports_;
};

void check_rows(Report& rep, const FiniteMeasureMDP& mdp) {
    std::size_t rows = 0;
    for (const auto& r : mdp.kernel) rows += r.size();
    try {
        mdp.check_stochastic(kRowTol);
        rep.pass("kernel_rows", std::to_string(rows) + " rows sum to 1 within " + fmt(kRowTol));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NonStochasticKernel) throw;
        rep.fail("kernel_rows", e.what());
    }
}

}  // namespace

int cmd_build(const Options& o) {
    const RunConfig cfg = load(o);
    const Resolved r = resolve(cfg);
    r.model.validate(cfg.seed);
    const FiniteMeasureMDP mdp = build(cfg, r);
    const fs::path dir = out_dir(o);
    const std::string text = mdp_to_string(mdp);
    write_text(dir / "mdp.txt", text);
    std::size_t pairs = 0;
    for (const auto& a : mdp.actions) pairs += a.size();
    std::ostringstream log;
    log << "model " << mdp.meta.model_name << '\n'
        << "kind " << to_string(mdp.meta.kind) << '\n'
        << "population " << mdp.meta.population << '\n'
        << "cells " << mdp.meta.num_cells << '\n'
        << "action_atoms " << mdp.meta.num_actions << '\n'
        << "beta " << fmt(mdp.beta) << '\n'
        << "L_X " << fmt(r.grid.L_X()) << '\n'
        << "states " << mdp.num_states() << '\n'
        << "state_action_pairs " << pairs << '\n'
        << "exact " << (mdp.meta.exact ? "true" : "false") << '\n'
        << "rule_resolution " << (mdp.meta.rule_resolution.empty() ? "-" : mdp.meta.rule_resolution) << '\n'
        << "config_hash " << cfg.build_hash << '\n'
        << "mdp_hash " << hash_hex(text) << '\n';
    write_text(dir / "build.log", log.str());
    std::cout << "wrote " << (dir / "mdp.txt").string() << ": " << mdp.num_states() << " states, " << pairs
              << " state-action pairs\n";
    return kOk;
}

int cmd_solve(const Options& o) {
    double tol = 1e-8;
    int max_iter = 100'000;
    if (!o.config.empty()) {
        const RunConfig cfg = load(o);
        tol = cfg.tol;
        max_iter = cfg.max_iter;
    } else {
        if (o.tol) tol = *o.tol;
        if (!(tol > 0.0)) throw Error(ErrorKind::Config, "--tol must be > 0");
        if (o.threads) {
            if (*o.threads < 1) throw Error(ErrorKind::Config, "--threads must be >= 1");
            set_num_threads(*o.threads);
        }
    }
    const fs::path mdp_path = o.mdp.empty() ? fs::path(o.out) / "mdp.txt" : fs::path(o.mdp);
    auto in = open_in(mdp_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::istringstream is(text);
    const FiniteMeasureMDP mdp = read_mdp(is);
    const SolveResult result = value_iteration(mdp, {tol, max_iter});

    const fs::path dir = out_dir(o);
    std::ostringstream sol, csv, pol;
    write_solution(sol, {hash_hex(text), mdp.meta.config_hash, result});
    write_values_csv(csv, mdp, result);
    write_policy(pol, policy_file(mdp, result.policy));
    write_text(dir / "solution.txt", sol.str());
    write_text(dir / "values.csv", csv.str());
    write_text(dir / "policy.txt", pol.str());
    std::cout << (result.converged ? "converged" : "not converged") << " after " << result.iterations
              << " sweeps, final gap " << fmt(result.gaps.empty() ? 0.0 : result.gaps.back())
              << ", max gap ratio " << fmt(max_gap_ratio(result.gaps)) << '\n';
    return kOk;
}

int cmd_simulate(const Options& o) {
    const RunConfig cfg = load(o);
    const Resolved r = resolve(cfg);
    const AgentPolicy policy = load_policy(o, cfg, r);
    const Rollout ro = rollout_setup(cfg, r);
    const fs::path dir = out_dir(o);
    std::ostringstream traj;
    TrajectorySink sink;
    if (cfg.simulate.trajectory_rollouts > 0) {
        traj << "t,rollout,agent";
        for (std::size_t d = 0; d < r.grid.dim(); ++d) traj << ",x" << d;
        for (std::size_t d = 0; d < r.actions.atom(0).size(); ++d) traj << ",u" << d;
        traj << ",cost\n";
        sink = {&traj, cfg.simulate.trajectory_rollouts};
    }
    const CostEstimate est = rollout_team(r.model, r.grid, r.actions, policy, ro.init, ro.rc, sink);
    std::ostringstream csv;
    csv << "agents,horizon,rollouts,feedback,mean,std_error,truncation_bound\n"
        << ro.rc.agents << ',' << ro.rc.horizon << ',' << ro.rc.rollouts << ',' << to_string(ro.rc.feedback) << ','
        << fmt(est.mean) << ',' << fmt(est.std_error) << ',' << fmt(est.truncation_bound) << '\n';
    write_text(dir / "estimate.csv", csv.str());
    if (sink.out) write_text(dir / "trajectory.csv", traj.str());
    std::cout << "mean cost " << fmt(est.mean) << " +- " << fmt(est.std_error) << " (truncation "
              << fmt(est.truncation_bound) << ")\n";
    return kOk;
}

int cmd_regret(const Options& o) {
    const RunConfig cfg = load(o);
    const Resolved r = resolve(cfg);
    const AgentPolicy policy = load_policy(o, cfg, r);
    const Rollout ro = rollout_setup(cfg, r);
    Baseline b;
    if (cfg.regret.baseline == RegretSpec::Baseline::Value) {
        const FiniteMeasureMDP mdp = build(cfg, r);
        b = make_baseline(cfg, r, ro, mdp, solve(mdp, cfg));
    } else {
        b = make_baseline(cfg, r, ro, {}, {});
    }
    const RegretRow row = run_regret(r, policy, ro, b);
    std::ostringstream csv;
    csv << "cells,population,agents,horizon,rollouts,L_X,estimate,std_error,truncation,baseline,regret,tolerance,"
           "bound_regret\n"
        << r.grid.size() << ',' << cfg.population << ',' << row.agents << ',' << row.horizon << ','
        << ro.rc.rollouts << ',' << fmt(r.grid.L_X()) << ',' << fmt(row.rep.estimate.mean) << ','
        << fmt(row.rep.estimate.std_error) << ',' << fmt(row.rep.estimate.truncation_bound) << ','
        << fmt(row.rep.baseline) << ',' << fmt(row.rep.regret) << ',' << fmt(row.rep.tolerance) << ','
        << fmt(row.bound) << '\n';
    const fs::path dir = out_dir(o);
    write_text(dir / "regret.csv", csv.str());
    std::cout << "regret " << fmt(row.rep.regret) << " (tolerance " << fmt(row.rep.tolerance) << ", bound "
              << fmt(row.bound) << ")\n";
    return kOk;
}

int cmd_sweep(const Options& o) {
    if (o.param != "M" && o.param != "n") throw Error(ErrorKind::Config, "--param must be 'M' or 'n'");
    const std::vector<int> values = parse_values(o.values);
    const RunConfig base = load(o);
    const Resolved base_r = resolve(base);
    if (o.param == "M" && base_r.model.state_bounds.dim() != 1)
        throw Error(ErrorKind::Config, "sweeping M needs a one-dimensional state space");

    std::ostringstream csv;
    csv << "parameter,value,cells,population,states,iterations,L_X,m_n,M_n,estimate,std_error,truncation,baseline,"
           "regret,tolerance,bound_regret\n";
    std::optional<Baseline> oracle;
    for (int v : values) {
        RunConfig cfg = base;
        if (o.param == "M") {
            cfg.grid = GridSpec{};
            cfg.grid.cells = {v};
        } else {
            cfg.population = v;
        }
        refresh_build_hash(cfg);
        const Resolved r = resolve(cfg);
        const FiniteMeasureMDP mdp = build(cfg, r);
        const SolveResult sol = solve(mdp, cfg);
        const AgentPolicy policy = to_agent_policy(mdp, sol.policy);
        const Rollout ro = rollout_setup(cfg, r);
        Baseline b;
        if (cfg.regret.baseline == RegretSpec::Baseline::Oracle) {
            // the oracle depends on the agent count only
            if (!oracle) oracle = oracle_baseline(cfg, r, ro);
            b = *oracle;
        } else {
            b = make_baseline(cfg, r, ro, mdp, sol);
        }
        const RegretRow row = run_regret(r, policy, ro, b);
        double m_n = kNaN, M_n = kNaN;
        if (o.param == "n") {
            const SimplexSearch search = SimplexSearch::grid(cfg.sweep.search_resolution);
            m_n = estimate_m_n(r.grid.size(), v, search).value;
            SimplexSearch seeded = search;
            seeded.seed = cfg.seed;
            M_n = estimate_M_n(r.grid.size(), v, cfg.sweep.sampling_samples, seeded).value;
        }
        csv << o.param << ',' << v << ',' << r.grid.size() << ',' << cfg.population << ',' << mdp.num_states() << ','
            << sol.iterations << ',' << fmt(r.grid.L_X()) << ',' << fmt(m_n) << ',' << fmt(M_n) << ','
            << fmt(row.rep.estimate.mean) << ',' << fmt(row.rep.estimate.std_error) << ','
            << fmt(row.rep.estimate.truncation_bound) << ',' << fmt(row.rep.baseline) << ',' << fmt(row.rep.regret)
            << ',' << fmt(row.rep.tolerance) << ',' << fmt(row.bound) << '\n';
        std::cout << o.param << '=' << v << ": " << mdp.num_states() << " states, regret " << fmt(row.rep.regret)
                  << '\n';
    }
    const fs::path dir = out_dir(o);
    write_text(dir / "sweep.csv", csv.str());
    return kOk;
}

int cmd_check(const Options& o) {
    Report rep;
    if (!o.mdp.empty()) {
        check_rows(rep, read_mdp_file(o.mdp));
        if (o.config.empty()) return rep.failed() ? kCheckFailed : kOk;
    }
    const RunConfig cfg = load(o);
    const Resolved r = resolve(cfg);
    const AgentModel& m = r.model;

    try {
        m.validate(cfg.seed);
        rep.pass("model_invariants", "probabilities, constants and boxes are consistent");
    } catch (const Error& e) {
        rep.fail("model_invariants", e.what());
    }
    const LipschitzEstimate lip = estimate_lipschitz(m, cfg.check.lipschitz_samples, cfg.seed);
    const std::string lip_detail = "sampled K_f >= " + fmt(lip.K_f) + " (declared " + fmt(m.K_f) + "), K_c >= " +
                                   fmt(lip.K_c) + " (declared " + fmt(m.K_c) + ")";
    if (lip.warning.empty()) rep.pass("lipschitz_constants", lip_detail);
    else rep.warn("lipschitz_constants", lip.warning);

    const FiniteMeasureMDP mdp = build(cfg, r);
    check_rows(rep, mdp);
    if (rep.failed()) return kCheckFailed;

    const SolveResult sol = solve(mdp, cfg);
    rep.check(sol.converged, "solver_converged",
              std::to_string(sol.iterations) + " sweeps, final gap " + fmt(sol.gaps.back()));
    const double ratio = max_gap_ratio(sol.gaps);
    rep.check(ratio <= m.beta + kGapSlack, "solver_contraction",
              "max sweep-gap ratio " + fmt(ratio) + " vs beta " + fmt(m.beta) + " + " + fmt(kGapSlack));

    const bool finite_noise = m.idio_noise.is_finite() && m.common_noise.is_finite();
    const bool oracle_ok = cfg.kind == MdpKind::FinitePopulation && finite_noise &&
                           cfg.population <= cfg.check.oracle_max_agents;
    const std::string oracle_why =
        cfg.kind != MdpKind::FinitePopulation ? "only defined for the finite-population model"
        : !finite_noise                       ? "needs finite-support noise"
                                              : "population above check.oracle_max_agents";
    if (oracle_ok) {
        try {
            const OracleResult oracle = brute_force_oracle(m, r.grid, r.actions, cfg.population, m.beta, cfg.tol);
            double diff = 0.0;
            for (std::size_t s = 0; s < mdp.num_states(); ++s)
                diff = std::max(diff, std::abs(oracle.measure_values[s] - sol.value.values[s]));
            rep.check(diff <= cfg.check.oracle_tol, "oracle_equivalence",
                      "max |V_measure - V_vector| " + fmt(diff) + " vs " + fmt(cfg.check.oracle_tol));
            rep.check(oracle.max_permutation_spread <= cfg.check.oracle_tol, "permutation_invariance",
                      "max spread " + fmt(oracle.max_permutation_spread) + " vs " + fmt(cfg.check.oracle_tol));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::CapExceeded) throw;
            rep.skip("oracle_equivalence", e.what());
        }
    } else {
        rep.skip("oracle_equivalence", oracle_why);
    }

    const ContractionReport contraction = validate_contraction(m);
    if (!contraction.ok) {
        const std::string why = "2 K_f beta = " + fmt(contraction.value) + " >= 1";
        rep.skip("value_lipschitz", why);
        rep.skip("bound_discretization", why);
    } else {
        const BoundReport lv = check_value_lipschitz(mdp, sol.value, m.K_c, m.K_f, cfg.check.value_pairs, cfg.seed);
        rep.record(lv);
        rep.check(lv.satisfied, "value_lipschitz",
                  "worst ratio " + fmt(lv.lhs) + " vs " + fmt(lv.rhs) + (lv.witness.empty() ? "" : "; " + lv.witness));

        if (oracle_ok && m.state_bounds.dim() == 1) {
            try {
                const int ref_cells = cfg.regret.reference_cells;
                const int cells[] = {ref_cells};
                const StateGrid ref = StateGrid::uniform(m.state_bounds, cells);
                const OracleResult oracle =
                    brute_force_oracle(m, ref, r.actions, cfg.population, m.beta, cfg.tol, kReferenceCap);
                double worst = 0.0;
                for (std::size_t s = 0; s < mdp.num_states(); ++s) {
                    std::vector<std::size_t> idx;
                    for (const auto& p : representative_cloud(mdp.states[s], r.grid).points) idx.push_back(ref.quantize(p));
                    worst = std::max(worst, std::abs(sol.value.values[s] - oracle.vector_values[oracle_vector_index(idx, ref.size())]));
                }
                BoundReport b;
                b.name = "bound_discretization";
                b.lhs = worst;
                b.rhs = bound_discretization(m.K_c, m.K_f, m.beta, r.grid.L_X());
                b.satisfied = b.lhs <= b.rhs;
                b.inputs = {{"K_c", m.K_c}, {"K_f", m.K_f}, {"beta", m.beta}, {"L_X", r.grid.L_X()},
                            {"reference_cells", static_cast<double>(ref_cells)}};
                rep.record(b);
                rep.check(b.satisfied, "bound_discretization",
                          "max |V_M - V_ref| " + fmt(b.lhs) + " vs bound " + fmt(b.rhs));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::CapExceeded && e.kind() != ErrorKind::OutOfBounds) throw;
                rep.skip("bound_discretization", e.what());
            }
        } else {
            rep.skip("bound_discretization", oracle_ok ? "needs a one-dimensional state space" : oracle_why);
        }
    }

    const fs::path dir = out_dir(o);
    std::ostringstream csv;
    write_bound_csv_header(csv);
    for (const auto& b : rep.reports()) write_bound_csv(csv, b);
    write_text(dir / "checks.csv", csv.str());
    return rep.failed() ? kCheckFailed : kOk;
}

}  // namespace mfc::cli
