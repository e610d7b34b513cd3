// Acceptance suite: one PASS/FAIL line per criterion, every tolerance pinned
// below. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mfc/diagnostics.hpp"
#include "mfc/mdp.hpp"
#include "mfc/measures.hpp"
#include "mfc/parallel.hpp"
#include "mfc/registry.hpp"
#include "mfc/serialize.hpp"
#include "mfc/simulate.hpp"
#include "mfc/solver.hpp"
#include "support.hpp"

using namespace mfc;

namespace {

constexpr double kSolveTol = 1e-8;
constexpr double kEquivalenceTol = 1e-6;     // C1
constexpr double kPermutationTol = 1e-9;     // C2
constexpr double kExampleTol = 1e-11;        // C3
constexpr double kDivergenceThreshold = 1e3; // C3
constexpr double kRowSumTol = 1e-9;          // C7
constexpr double kGapRatioSlack = 1e-12;     // C10
constexpr int kLipschitzPairs = 500;         // C6
constexpr int kRegretRollouts = 2000;        // C5
constexpr double kTruncationTol = 1e-6;      // C5, C9
constexpr double kRefCells = 64;             // C4, C5

struct Solved {
    std::string label;
    FiniteMeasureMDP mdp;
    SolveResult result;
    double K_c;
    double K_f;
};

std::vector<Solved> g_solved;

const Solved& solve_and_keep(std::string label, FiniteMeasureMDP mdp, const AgentModel& model) {
    SolveResult res = value_iteration(mdp, {kSolveTol, 100'000});
    g_solved.push_back({std::move(label), std::move(mdp), std::move(res), model.K_c, model.K_f});
    return g_solved.back();
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

StateGrid uniform_grid(const AgentModel& model, int cells) {
    const int c[] = {cells};
    return StateGrid::uniform(model.state_bounds, c);
}

// ---- C1 / C2 --------------------------------------------------------------

struct OracleCase {
    std::string model;
    int N;
};

const std::vector<OracleCase> kOracleCases = {
    {"switch-2state", 2}, {"switch-2state", 3}, {"ladder-3state", 2}, {"ladder-3state", 3}};

std::vector<OracleResult> g_oracles;

Outcome criterion_equivalence() {
    Outcome out;
    std::ostringstream d;
    for (const auto& c : kOracleCases) {
        const auto t0 = std::chrono::steady_clock::now();
        const ModelBundle b = make_model(c.model);
        const OracleResult oracle =
            brute_force_oracle(b.model, b.default_grid, b.default_actions, c.N, b.model.beta, kSolveTol);
        FiniteMeasureMDP mdp = build_finite_population_mdp(b.model, b.default_grid, b.default_actions, c.N);
        const Solved& s = solve_and_keep(c.model + " N=" + std::to_string(c.N), std::move(mdp), b.model);
        double worst = 0.0;
        for (std::size_t i = 0; i < s.mdp.num_states(); ++i)
            worst = std::max(worst, std::abs(s.result.value.values[i] - oracle.measure_values[i]));
        const double secs = seconds_since(t0);
        const bool ok = worst <= kEquivalenceTol && secs < 60.0;
        out.pass = out.pass && ok;
        d << c.model << " N=" << c.N << " max|diff|=" << fmt(worst) << " (" << fmt(secs) << "s); ";
        g_oracles.push_back(oracle);
    }
    out.detail = d.str() + "tol " + fmt(kEquivalenceTol) + ", < 60 s each";
    return out;
}

Outcome criterion_exchangeability() {
    Outcome out;
    std::ostringstream d;
    for (std::size_t i = 0; i < g_oracles.size(); ++i) {
        const double spread = g_oracles[i].max_permutation_spread;
        out.pass = out.pass && spread <= kPermutationTol;
        d << kOracleCases[i].model << " N=" << kOracleCases[i].N << " spread=" << fmt(spread) << "; ";
    }
    out.detail = d.str() + "tol " + fmt(kPermutationTol);
    return out;
}

// ---- C3 -------------------------------------------------------------------

Outcome criterion_divergence_example() {
    Outcome out;
    ModelBundle b = make_model("paper-example");
    constexpr int N = 4;
    AgentPolicy policy;
    policy.population = N;
    policy.num_cells = 1;
    policy.num_actions = 1;
    policy.probs = {1.0};

    RolloutConfig cfg;
    cfg.agents = N;
    cfg.horizon = 40;
    cfg.rollouts = 1;
    cfg.cost_sup = 0.0;  // the truncation tail is computed analytically below
    const PointCloudMeasure ones{std::vector<Vec>(N, Vec{1.0})};
    const PointCloudMeasure zeros{std::vector<Vec>(N, Vec{0.0})};

    const double beta = b.model.beta;
    // from all ones the discounted cost at step t is (2 beta)^t
    const double tail = std::pow(2.0 * beta, cfg.horizon) / (1.0 - 2.0 * beta);
    const double from_ones = rollout_team(b.model, b.default_grid, b.default_actions, policy, ones, cfg).mean;
    const double from_zeros = rollout_team(b.model, b.default_grid, b.default_actions, policy, zeros, cfg).mean;
    const bool ones_ok = std::abs(from_ones - 2.0) <= tail && tail <= kExampleTol;
    const bool zeros_ok = from_zeros == 0.0;

    b.model.beta = 0.55;
    std::vector<double> partial;
    for (int T : {10, 20, 40, 60}) {
        cfg.horizon = T;
        partial.push_back(rollout_team(b.model, b.default_grid, b.default_actions, policy, ones, cfg).mean);
    }
    const bool increasing = std::is_sorted(partial.begin(), partial.end()) &&
                            std::adjacent_find(partial.begin(), partial.end()) == partial.end();
    const bool diverges = increasing && partial.back() > kDivergenceThreshold;

    out.pass = ones_ok && zeros_ok && diverges;
    out.detail = "ones: " + fmt(from_ones) + " (|err| " + fmt(std::abs(from_ones - 2.0)) + " <= tail " +
                 fmt(tail) + " <= " + fmt(kExampleTol) + "); zeros: " + fmt(from_zeros) +
                 "; beta=0.55 partial sums T=10,20,40,60: " + fmt(partial[0]) + ", " + fmt(partial[1]) + ", " +
                 fmt(partial[2]) + ", " + fmt(partial[3]) + " (> " + fmt(kDivergenceThreshold) + ")";
    return out;
}

// ---- C4 / C5 --------------------------------------------------------------

constexpr int kCrowdAgents = 2;
const std::vector<int> kCrowdCells = {2, 4, 8, 16};

struct Reference {
    StateGrid grid;
    OracleResult oracle;
};

Reference& crowd_reference() {
    static Reference ref = [] {
        const ModelBundle b = make_model("crowd-1d");
        StateGrid fine = uniform_grid(b.model, static_cast<int>(kRefCells));
        OracleResult o = brute_force_oracle(b.model, fine, b.default_actions, kCrowdAgents, b.model.beta, kSolveTol);
        return Reference{std::move(fine), std::move(o)};
    }();
    return ref;
}

double reference_value(const PointCloudMeasure& cloud) {
    Reference& ref = crowd_reference();
    return ref.oracle.measure_values[rank_PN(project_to_grid(cloud, ref.grid).counts)];
}

std::vector<const Solved*> g_crowd;  // one per entry of kCrowdCells

Outcome criterion_discretization() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    std::ostringstream d;
    const ModelBundle b = make_model("crowd-1d");
    crowd_reference();
    std::vector<double> errors;
    for (int M : kCrowdCells) {
        const StateGrid grid = uniform_grid(b.model, M);
        FiniteMeasureMDP mdp = build_finite_population_mdp(b.model, grid, b.default_actions, kCrowdAgents);
        const Solved& s = solve_and_keep("crowd-1d M=" + std::to_string(M), std::move(mdp), b.model);
        g_crowd.push_back(&s);
        double worst = 0.0;
        for (std::size_t i = 0; i < s.mdp.num_states(); ++i) {
            const double ref = reference_value(representative_cloud(s.mdp.states[i], grid));
            worst = std::max(worst, std::abs(s.result.value.values[i] - ref));
        }
        const double bound = bound_discretization(b.model.K_c, b.model.K_f, b.model.beta, grid.L_X());
        out.pass = out.pass && worst <= bound;
        errors.push_back(worst);
        d << "M=" << M << " err=" << fmt(worst) << " bound=" << fmt(bound) << "; ";
    }
    for (std::size_t i = 1; i < errors.size(); ++i) out.pass = out.pass && errors[i] <= errors[i - 1];
    const double secs = seconds_since(t0);
    out.pass = out.pass && secs < 600.0;
    out.detail = d.str() + "non-increasing, reference " + fmt(kRefCells) + " cells, " + fmt(secs) + "s (< 600 s)";
    return out;
}

Outcome criterion_regret() {
    Outcome out;
    std::ostringstream d;
    const ModelBundle b = make_model("crowd-1d");
    const PointCloudMeasure init{{Vec{0.1}, Vec{0.9}}};
    const Reference& ref = crowd_reference();
    const double baseline = reference_value(init);
    // the reference itself sits within its discretization bound of the optimum
    const double baseline_tol = bound_discretization(b.model.K_c, b.model.K_f, b.model.beta, ref.grid.L_X());
    for (std::size_t m = 0; m < kCrowdCells.size(); ++m) {
        const StateGrid grid = uniform_grid(b.model, kCrowdCells[m]);
        const Solved& s = *g_crowd[m];
        const AgentPolicy policy = to_agent_policy(s.mdp, s.result.policy);
        RolloutConfig cfg;
        cfg.agents = kCrowdAgents;
        cfg.rollouts = kRegretRollouts;
        cfg.seed = 7;
        cfg.realization = Realization::Coordinated;
        cfg.horizon = horizon_for_tolerance(b.model.beta, estimate_cost_sup(b.model, grid, b.default_actions),
                                            kTruncationTol);
        const RegretReport r = regret(b.model, grid, b.default_actions, policy, init, cfg, baseline, baseline_tol);
        const double bound = bound_regret(b.model.K_c, b.model.K_f, b.model.beta, grid.L_X());
        out.pass = out.pass && r.regret <= bound + r.tolerance;
        d << "M=" << kCrowdCells[m] << " regret=" << fmt(r.regret) << " (se " << fmt(r.estimate.std_error)
          << ") <= " << fmt(bound) << "+" << fmt(r.tolerance) << "; ";
    }
    out.detail = d.str() + "R=" + std::to_string(kRegretRollouts);
    return out;
}

// ---- C8 / C9 --------------------------------------------------------------

Outcome criterion_aggregation() {
    Outcome out;
    std::ostringstream d;
    bool idempotent = true;
    for (std::size_t M = 1; M <= 4; ++M)
        for (int n = 1; n <= 4; ++n)
            for (const auto& mu : enumerate_PN(M, n))
                idempotent = idempotent && nearest_empirical(SimplexMeasure::from(mu), n) == mu;
    d << "rho idempotent on P_n (n,M <= 4): " << (idempotent ? "yes" : "no") << "; ";
    out.pass = idempotent;

    constexpr double kResM2 = 1e-4;
    constexpr double kResM3 = 1.0 / 480.0;
    for (std::size_t M : {2u, 3u}) {
        const SimplexSearch search = SimplexSearch::grid(M == 2 ? kResM2 : kResM3);
        std::vector<double> m_n;
        for (int n : {2, 4, 8, 16}) m_n.push_back(estimate_m_n(M, n, search).value);
        const bool mono = std::is_sorted(m_n.rbegin(), m_n.rend());
        out.pass = out.pass && mono;
        d << "M=" << M << " m_n(2,4,8,16)=" << fmt(m_n[0]) << "," << fmt(m_n[1]) << "," << fmt(m_n[2]) << ","
          << fmt(m_n[3]) << "; ";
        if (M == 2) {
            const bool ok = std::abs(m_n[0] - 0.5) <= kResM2;
            out.pass = out.pass && ok;
            d << "m_2(M=2)=" << fmt(m_n[0]) << " vs 0.5 +- " << fmt(kResM2) << "; ";
        }
    }
    out.detail = d.str();
    return out;
}

Outcome criterion_sampling() {
    Outcome out;
    std::ostringstream d;
    // exact sampling row: the coin model sends every agent to either cell w.p. 1/2
    {
        const ModelBundle coin = test::coin_model();
        FiniteMeasureMDP mdp = build_sampling_mdp(coin.model, coin.default_grid, coin.default_actions, 2);
        bool exact = true;
        for (std::size_t s = 0; s < mdp.num_states(); ++s)
            for (const auto& row : mdp.kernel[s]) {
                exact = exact && row.next == std::vector<std::uint32_t>{0, 1, 2} &&
                        row.prob == std::vector<double>{0.25, 0.5, 0.25};
            }
        out.pass = exact;
        d << "row (0.25,0.5,0.25) exact: " << (exact ? "yes" : "no") << "; ";
        solve_and_keep("coin sampling n=2", std::move(mdp), coin.model);
    }
    {
        constexpr int kSamples = 200'000;
        const std::vector<double> mu{0.5, 0.5};
        const SamplingError e = expected_sampling_error(mu, 2, kSamples, 11);
        const bool ok = std::abs(e.mean - 0.5) <= 3.0 * e.std_error;
        out.pass = out.pass && ok;
        d << "M_2(0.5,0.5)=" << fmt(e.mean) << " (3se " << fmt(3.0 * e.std_error) << "); ";
    }
    {
        // sampled-feedback policies from the sampling MDP, run in the N-agent system
        const ModelBundle b = make_model("crowd-1d");
        const StateGrid grid = uniform_grid(b.model, 3);
        constexpr int kAgents = 50;
        constexpr int kRollouts = 1000;
        PointCloudMeasure init;
        for (int i = 0; i < kAgents; ++i) init.points.push_back(Vec{(i + 0.5) / kAgents});

        FiniteMeasureMDP agg = build_aggregation_mdp(b.model, grid, b.default_actions, 16);
        const Solved& base = solve_and_keep("crowd-1d aggregation n=16", std::move(agg), b.model);
        const EmpiricalMeasure init_counts = project_to_grid(init, grid);
        const std::size_t init_state = nearest_empirical_index(
            SimplexMeasure::from(init_counts).weights, base.mdp.states);
        const double baseline = base.result.value.values[init_state];

        std::vector<double> regrets;
        for (int n : {2, 4, 8}) {
            FiniteMeasureMDP mdp = build_sampling_mdp(b.model, grid, b.default_actions, n);
            const Solved& s = solve_and_keep("crowd-1d sampling n=" + std::to_string(n), std::move(mdp), b.model);
            RolloutConfig cfg;
            cfg.agents = kAgents;
            cfg.rollouts = kRollouts;
            cfg.seed = 3;
            cfg.feedback = Feedback::Sampled;
            cfg.feedback_n = n;
            cfg.horizon = horizon_for_tolerance(b.model.beta, estimate_cost_sup(b.model, grid, b.default_actions),
                                                kTruncationTol);
            const RegretReport r = regret(b.model, grid, b.default_actions, to_agent_policy(s.mdp, s.result.policy),
                                          init, cfg, baseline, 0.0);
            regrets.push_back(r.regret);
            d << "n=" << n << " regret=" << fmt(r.regret) << " (se " << fmt(r.estimate.std_error) << "); ";
        }
        const bool decreasing = regrets[1] < regrets[0] && regrets[2] < regrets[1];
        out.pass = out.pass && decreasing;
    }
    out.detail = d.str();
    return out;
}

// ---- C6 / C7 / C10 over everything solved above ---------------------------

Outcome criterion_value_lipschitz() {
    Outcome out;
    std::ostringstream d;
    for (const auto& s : g_solved) {
        if (2.0 * s.K_f * s.mdp.beta >= 1.0) {
            out.pass = false;
            d << s.label << ": contraction fails; ";
            continue;
        }
        const BoundReport r = check_value_lipschitz(s.mdp, s.result.value, s.K_c, s.K_f, kLipschitzPairs, 5);
        out.pass = out.pass && r.satisfied;
        d << s.label << " " << fmt(r.lhs) << "<=" << fmt(r.rhs);
        if (!r.satisfied) d << " [" << r.witness << "]";
        d << "; ";
    }
    out.detail = d.str() + std::to_string(kLipschitzPairs) + " pairs each";
    return out;
}

Outcome criterion_stochastic_deterministic() {
    Outcome out;
    std::ostringstream d;
    double worst = 0.0;
    for (const auto& s : g_solved)
        for (const auto& rows : s.mdp.kernel)
            for (const auto& row : rows) worst = std::max(worst, std::abs(row.sum() - 1.0));
    out.pass = worst <= kRowSumTol;
    d << "max |row sum - 1| over " << g_solved.size() << " MDPs = " << fmt(worst) << " (tol " << fmt(kRowSumTol)
      << "); ";

    const ModelBundle crowd = make_model("crowd-1d");
    const StateGrid grid = uniform_grid(crowd.model, 4);
    McConfig mc;
    mc.seed = 99;
    const std::vector<std::pair<std::string, std::function<FiniteMeasureMDP()>>> builds = {
        {"finite-population", [&] { return build_finite_population_mdp(crowd.model, grid, crowd.default_actions, 3); }},
        {"finite-population sampled-uniform",
         [&] {
             return build_finite_population_mdp(crowd.model, grid, crowd.default_actions, 2,
                                                WeightScheme::sampled_uniform(8), mc);
         }},
        {"aggregation", [&] { return build_aggregation_mdp(crowd.model, grid, crowd.default_actions, 4, mc); }},
        {"sampling", [&] { return build_sampling_mdp(crowd.model, grid, crowd.default_actions, 4, mc); }},
    };
    for (const auto& [name, build] : builds) {
        set_num_threads(1);
        const std::string one = mdp_to_string(build());
        set_num_threads(4);
        const std::string four = mdp_to_string(build());
        set_num_threads(1);
        const bool same = one == four;
        out.pass = out.pass && same;
        d << name << " threads 1 vs 4: " << (same ? "identical" : "DIFFERENT") << " (" << one.size() << " bytes); ";
    }
    out.detail = d.str();
    return out;
}

Outcome criterion_contraction() {
    Outcome out;
    std::ostringstream d;
    double worst_excess = -1.0;
    std::string worst_label;
    for (const auto& s : g_solved) {
        const double excess = max_gap_ratio(s.result.gaps) - s.mdp.beta;
        if (excess > worst_excess) {
            worst_excess = excess;
            worst_label = s.label;
        }
        out.pass = out.pass && excess <= kGapRatioSlack;
    }
    d << "max over " << g_solved.size() << " solves of (gap ratio - beta) = " << fmt(worst_excess) << " at "
      << worst_label << " (slack " << fmt(kGapRatioSlack) << ")";
    out.detail = d.str();
    return out;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    // C6, C7 and C10 inspect every MDP solved by the earlier criteria.
    const std::vector<Entry> order = {
        {1, "oracle equivalence", criterion_equivalence},
        {2, "exchangeability", criterion_exchangeability},
        {3, "divergence example", criterion_divergence_example},
        {4, "discretization error", criterion_discretization},
        {5, "regret bound", criterion_regret},
        {8, "aggregation", criterion_aggregation},
        {9, "sampling kernel", criterion_sampling},
        {6, "value Lipschitz", criterion_value_lipschitz},
        {7, "stochastic rows and determinism", criterion_stochastic_deterministic},
        {10, "solver contraction", criterion_contraction},
    };
    std::vector<std::pair<int, std::string>> lines;
    bool all = true;
    for (const auto& e : order) {
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o.pass = false;
            o.detail = std::string("exception: ") + ex.what();
        }
        all = all && o.pass;
        std::ostringstream line;
        line << (o.pass ? "PASS" : "FAIL") << " criterion " << e.id << " (" << e.name << "): " << o.detail;
        lines.push_back({e.id, line.str()});
        std::cerr << "[done " << e.id << "]\n";
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& [id, text] : lines) std::cout << text << '\n';
    return all ? 0 : 1;
}
