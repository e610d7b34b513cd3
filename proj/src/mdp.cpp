#include "mfc/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "mfc/error.hpp"
#include "mfc/parallel.hpp"
#include "mfc/rng.hpp"

namespace mfc {

double AgentRule::prob(std::size_t cell, std::size_t action) const {
    int rs = 0;
    for (std::size_t k = 0; k < num_actions; ++k) rs += numerators[cell * num_actions + k];
    if (rs == 0) return 1.0 / static_cast<double>(num_actions);
    return static_cast<double>(numerators[cell * num_actions + action]) / denominator;
}

ConditionalKernel AgentRule::kernel() const {
    ConditionalKernel g;
    g.num_cells = num_cells;
    g.num_actions = num_actions;
    g.probs.resize(num_cells * num_actions);
    for (std::size_t i = 0; i < num_cells; ++i)
        for (std::size_t k = 0; k < num_actions; ++k) g.probs[i * num_actions + k] = prob(i, k);
    return g;
}

ConditionalKernel action_kernel(const MeasureAction& action) {
    if (const auto* theta = std::get_if<JointEmpiricalMeasure>(&action)) return disintegrate(*theta);
    return std::get<AgentRule>(action).kernel();
}

double KernelRow::sum() const { return std::accumulate(prob.begin(), prob.end(), 0.0); }

const char* to_string(MdpKind kind) {
    switch (kind) {
        case MdpKind::FinitePopulation: return "finite-population";
        case MdpKind::Aggregation: return "aggregation";
        case MdpKind::Sampling: return "sampling";
    }
    return "?";
}

MdpKind mdp_kind_from_string(const std::string& s) {
    if (s == "finite-population") return MdpKind::FinitePopulation;
    if (s == "aggregation") return MdpKind::Aggregation;
    if (s == "sampling") return MdpKind::Sampling;
    throw Error(ErrorKind::Config, "unknown MDP kind '" + s + "'");
}

std::size_t FiniteMeasureMDP::state_index(const EmpiricalMeasure& mu) const {
    if (mu.counts.size() != meta.num_cells || mu.total != meta.population)
        throw Error(ErrorKind::UnreachableState, "measure does not belong to this MDP's state space");
    return rank_PN(mu.counts);
}

double FiniteMeasureMDP::cost_sup() const {
    double m = 0.0;
    for (const auto& row : cost)
        for (double c : row) m = std::max(m, std::abs(c));
    return m;
}

void FiniteMeasureMDP::check_stochastic(double tol) const {
    for (std::size_t s = 0; s < kernel.size(); ++s) {
        if (kernel[s].empty())
            throw Error(ErrorKind::NonStochasticKernel, "state " + std::to_string(s) + " has no actions");
        for (std::size_t a = 0; a < kernel[s].size(); ++a) {
            const KernelRow& row = kernel[s][a];
            bool bad = false;
            for (std::size_t e = 0; e < row.size(); ++e)
                if (!(row.prob[e] >= 0.0) || row.next[e] >= states.size()) bad = true;
            const double total = row.sum();
            if (bad || !(std::abs(total - 1.0) <= tol))
                throw Error(ErrorKind::NonStochasticKernel,
                            "row (state " + std::to_string(s) + ", action " + std::to_string(a) +
                                ") sums to " + std::to_string(total));
        }
    }
}

namespace {

KernelRow to_sparse(const std::vector<double>& dense) {
    KernelRow row;
    bool pruned = false;
    double kept = 0.0;
    for (std::size_t j = 0; j < dense.size(); ++j) {
        if (dense[j] == 0.0) continue;
        if (dense[j] < kPruneThreshold) {
            pruned = true;
            continue;
        }
        row.next.push_back(static_cast<std::uint32_t>(j));
        row.prob.push_back(dense[j]);
        kept += dense[j];
    }
    if (pruned)
        for (double& p : row.prob) p /= kept;
    return row;
}

Vec uniform_in_box(const Box& b, Rng& rng) {
    Vec x(b.dim());
    for (std::size_t d = 0; d < b.dim(); ++d) x[d] = b.lower[d] + uniform01(rng) * (b.upper[d] - b.lower[d]);
    return x;
}

// Per-agent law of the next cell for one common-noise value, sparse.
using CellLaw = std::vector<std::pair<std::size_t, double>>;

CellLaw next_cell_law(const AgentModel& model, const StateGrid& grid, const Vec& x, const Vec& u,
                      const MeanField& mf, const Vec& w0) {
    std::map<std::size_t, double> acc;
    for (const auto& atom : model.idio_noise.atoms())
        acc[grid.quantize(model.dynamics(x, u, mf, atom.value, w0))] += atom.prob;
    return CellLaw(acc.begin(), acc.end());
}

}  // namespace

std::vector<double> cloud_measure_kernel(const AgentModel& model, const StateGrid& grid,
                                         const ActionGrid& action_grid, std::span<const Vec> points,
                                         std::span<const std::size_t> actions, const McConfig& mc,
                                         std::uint64_t stream_key, bool* used_mc) {
    const std::size_t M = grid.size();
    const int N = static_cast<int>(points.size());
    if (points.size() != actions.size())
        throw Error(ErrorKind::InvalidAction, "one action per agent required");
    const std::uint64_t space = count_PN(M, N);
    if (space > mc.cap)
        throw Error(ErrorKind::CapExceeded, "|P_N| = " + std::to_string(space) + " exceeds cap");
    std::vector<double> out(space, 0.0);
    const MeanField mf = MeanField::from_cloud(points);

    if (model.idio_noise.is_finite() && model.common_noise.is_finite()) {
        for (const auto& w0 : model.common_noise.atoms()) {
            if (w0.prob == 0.0) continue;
            // convolve per-agent next-cell laws in agent order
            std::map<std::vector<int>, double> partial{{std::vector<int>(M, 0), 1.0}};
            for (int a = 0; a < N; ++a) {
                const CellLaw law = next_cell_law(model, grid, points[a], action_grid.atom(actions[a]), mf, w0.value);
                std::map<std::vector<int>, double> next;
                for (const auto& [counts, p] : partial) {
                    for (const auto& [cell, q] : law) {
                        std::vector<int> c = counts;
                        ++c[cell];
                        next[std::move(c)] += p * q;
                    }
                }
                partial = std::move(next);
            }
            for (const auto& [counts, p] : partial) out[rank_PN(counts)] += w0.prob * p;
        }
        if (used_mc) *used_mc = false;
        return out;
    }

    if (mc.samples < 1) throw Error(ErrorKind::InvalidArgument, "Monte Carlo needs samples >= 1");
    Rng rng = make_stream(mc.seed, {0x6b65726eULL, stream_key});
    const double weight = 1.0 / mc.samples;
    std::vector<int> counts(M);
    for (int s = 0; s < mc.samples; ++s) {
        std::fill(counts.begin(), counts.end(), 0);
        const Vec w0 = model.common_noise.sample(rng);
        for (int a = 0; a < N; ++a) {
            const Vec wi = model.idio_noise.sample(rng);
            ++counts[grid.quantize(model.dynamics(points[a], action_grid.atom(actions[a]), mf, wi, w0))];
        }
        out[rank_PN(counts)] += weight;
    }
    if (used_mc) *used_mc = true;
    return out;
}

namespace {

void joint_to_agents(const JointEmpiricalMeasure& theta, const StateGrid& grid, std::vector<Vec>& points,
                     std::vector<std::size_t>& actions, std::vector<std::size_t>* cells = nullptr) {
    points.clear();
    actions.clear();
    for (std::size_t i = 0; i < theta.num_cells; ++i)
        for (std::size_t k = 0; k < theta.num_actions; ++k)
            for (int c = 0; c < theta.at(i, k); ++c) {
                points.push_back(grid.representative(i));
                actions.push_back(k);
                if (cells) cells->push_back(i);
            }
}

}  // namespace

std::vector<double> exact_measure_kernel(const AgentModel& model, const StateGrid& grid,
                                         const ActionGrid& action_grid, const EmpiricalMeasure& mu,
                                         const JointEmpiricalMeasure& theta, const McConfig& mc) {
    if (theta.num_cells != mu.counts.size() || theta.marginal().counts != mu.counts)
        throw Error(ErrorKind::InvalidAction, "joint action marginal does not match the state");
    if (theta.num_actions != action_grid.size())
        throw Error(ErrorKind::InvalidAction, "joint action width does not match the action grid");
    std::vector<Vec> points;
    std::vector<std::size_t> actions;
    joint_to_agents(theta, grid, points, actions);
    return cloud_measure_kernel(model, grid, action_grid, points, actions, mc);
}

double cloud_stage_cost(const AgentModel& model, const ActionGrid& action_grid,
                        std::span<const Vec> points, std::span<const std::size_t> actions) {
    const MeanField mf = MeanField::from_cloud(points);
    double s = 0.0;
    for (std::size_t a = 0; a < points.size(); ++a)
        s += model.stage_cost(points[a], action_grid.atom(actions[a]), mf);
    return s / static_cast<double>(points.size());
}

namespace {

std::string fraction(int den) { return "1/" + std::to_string(den); }

void check_inputs(const AgentModel& model, const StateGrid& grid, const ActionGrid& action_grid) {
    if (action_grid.atoms.empty()) throw Error(ErrorKind::EmptyActionGrid, "no action atoms");
    if (grid.dim() != static_cast<std::size_t>(model.state_dim))
        throw Error(ErrorKind::InvalidArgument, "grid dimension does not match the model");
    for (const auto& a : action_grid.atoms)
        if (a.size() != static_cast<std::size_t>(model.action_dim))
            throw Error(ErrorKind::InvalidArgument, "action atom dimension does not match the model");
}

BuildMeta base_meta(MdpKind kind, const AgentModel& model, const StateGrid& grid,
                    const ActionGrid& action_grid, int population, const McConfig& mc) {
    BuildMeta meta;
    meta.kind = kind;
    meta.model_name = model.name;
    meta.population = population;
    meta.num_cells = grid.size();
    meta.num_actions = action_grid.size();
    meta.representatives = grid.representatives();
    meta.action_atoms = action_grid.atoms;
    meta.seed = mc.seed;
    meta.mc_samples = mc.samples;
    return meta;
}

}  // namespace

FiniteMeasureMDP build_finite_population_mdp(const AgentModel& model, const StateGrid& grid,
                                             const ActionGrid& action_grid, int N,
                                             const WeightScheme& scheme, const McConfig& mc) {
    check_inputs(model, grid, action_grid);
    if (N < 1) throw Error(ErrorKind::InvalidArgument, "N must be >= 1");
    if (scheme.variant == WeightScheme::Variant::SampledUniformInBins && scheme.samples_per_bin < 1)
        throw Error(ErrorKind::InvalidArgument, "sampled weight scheme needs samples >= 1");

    FiniteMeasureMDP mdp;
    mdp.beta = model.beta;
    mdp.meta = base_meta(MdpKind::FinitePopulation, model, grid, action_grid, N, mc);
    mdp.meta.scheme = scheme;
    mdp.meta.rule_resolution = "joint";
    mdp.states = enumerate_PN(grid.size(), N, mc.cap);

    const std::size_t S = mdp.states.size();
    mdp.actions.resize(S);
    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t s = 0; s < S; ++s) {
        for (auto& theta : admissible_actions(mdp.states[s], action_grid.size(), mc.cap))
            mdp.actions[s].emplace_back(std::move(theta));
        for (std::size_t a = 0; a < mdp.actions[s].size(); ++a) jobs.emplace_back(s, a);
        if (jobs.size() > mc.cap) throw Error(ErrorKind::CapExceeded, "too many (state, action) pairs");
    }
    mdp.cost.resize(S);
    mdp.kernel.resize(S);
    for (std::size_t s = 0; s < S; ++s) {
        mdp.cost[s].resize(mdp.actions[s].size());
        mdp.kernel[s].resize(mdp.actions[s].size());
    }

    std::vector<char> used_mc(jobs.size(), 0);
    parallel_for(jobs.size(), [&](std::size_t j) {
        const auto [s, a] = jobs[j];
        const auto& theta = std::get<JointEmpiricalMeasure>(mdp.actions[s][a]);
        std::vector<Vec> points;
        std::vector<std::size_t> actions, cells;
        joint_to_agents(theta, grid, points, actions, &cells);
        const std::uint64_t key = (static_cast<std::uint64_t>(s) << 32) ^ a;
        bool mc_flag = false;
        if (scheme.variant == WeightScheme::Variant::DiracAtRepresentatives) {
            mdp.cost[s][a] = cloud_stage_cost(model, action_grid, points, actions);
            mdp.kernel[s][a] = to_sparse(cloud_measure_kernel(model, grid, action_grid, points, actions, mc, key, &mc_flag));
        } else {
            Rng rng = make_stream(mc.seed, {0x7765'6967ULL, s, a});
            std::vector<Box> boxes;
            for (std::size_t c : cells) boxes.push_back(grid.cell_box(c));
            std::vector<double> acc(count_PN(grid.size(), N), 0.0);
            double cost = 0.0;
            for (int r = 0; r < scheme.samples_per_bin; ++r) {
                for (std::size_t i = 0; i < points.size(); ++i) points[i] = uniform_in_box(boxes[i], rng);
                cost += cloud_stage_cost(model, action_grid, points, actions);
                bool f = false;
                const auto row = cloud_measure_kernel(model, grid, action_grid, points, actions, mc,
                                                      key * 0x100000001b3ULL + r, &f);
                mc_flag = mc_flag || f;
                for (std::size_t e = 0; e < acc.size(); ++e) acc[e] += row[e];
            }
            for (double& v : acc) v /= scheme.samples_per_bin;
            mdp.cost[s][a] = cost / scheme.samples_per_bin;
            mdp.kernel[s][a] = to_sparse(acc);
        }
        used_mc[j] = mc_flag;
    });
    mdp.meta.exact = std::none_of(used_mc.begin(), used_mc.end(), [](char c) { return c != 0; });
    return mdp;
}

std::vector<double> cell_transitions(const AgentModel& model, const StateGrid& grid,
                                     const ActionGrid& action_grid, const SimplexMeasure& mu,
                                     const Vec& w_common, const McConfig& mc, std::uint64_t stream_key,
                                     bool* used_mc) {
    const std::size_t M = grid.size(), K = action_grid.size();
    std::vector<double> T(M * K * M, 0.0);
    const MeanField mf = MeanField::from_weights(grid.representatives(), mu.weights);
    const bool exact = model.idio_noise.is_finite();
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            double* row = T.data() + (i * K + k) * M;
            const Vec& x = grid.representative(i);
            const Vec& u = action_grid.atom(k);
            if (exact) {
                for (const auto& atom : model.idio_noise.atoms())
                    row[grid.quantize(model.dynamics(x, u, mf, atom.value, w_common))] += atom.prob;
            } else {
                Rng rng = make_stream(mc.seed, {0x666c6f77ULL, stream_key, i, k});
                const double w = 1.0 / mc.samples;
                for (int s = 0; s < mc.samples; ++s)
                    row[grid.quantize(model.dynamics(x, u, mf, model.idio_noise.sample(rng), w_common))] += w;
            }
        }
    }
    if (used_mc) *used_mc = !exact;
    return T;
}

namespace {

SimplexMeasure flow_from_transitions(const std::vector<double>& T, std::size_t M, std::size_t K,
                                     std::span<const double> mu, const ConditionalKernel& gamma) {
    std::vector<double> out(M, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
        if (mu[i] == 0.0) continue;
        for (std::size_t k = 0; k < K; ++k) {
            const double w = mu[i] * gamma(i, k);
            if (w == 0.0) continue;
            const double* row = T.data() + (i * K + k) * M;
            for (std::size_t j = 0; j < M; ++j) out[j] += w * row[j];
        }
    }
    const double total = std::accumulate(out.begin(), out.end(), 0.0);
    for (double& v : out) v /= total;
    SimplexMeasure s;
    s.weights = std::move(out);
    return s;
}

}  // namespace

SimplexMeasure measure_flow(const AgentModel& model, const StateGrid& grid, const ActionGrid& action_grid,
                            const SimplexMeasure& mu, const ConditionalKernel& gamma, const Vec& w_common,
                            const McConfig& mc) {
    if (mu.support_size() != grid.size() || gamma.num_cells != grid.size() ||
        gamma.num_actions != action_grid.size())
        throw Error(ErrorKind::SupportMismatch, "measure, rule and grid sizes differ");
    const auto T = cell_transitions(model, grid, action_grid, mu, w_common, mc);
    return flow_from_transitions(T, grid.size(), action_grid.size(), mu.weights, gamma);
}

std::vector<AgentRule> enumerate_agent_rules(const EmpiricalMeasure& mu, std::size_t num_actions, int n,
                                             std::uint64_t cap) {
    if (num_actions == 0) throw Error(ErrorKind::EmptyActionGrid, "no action atoms");
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "rule denominator must be >= 1");
    std::vector<std::size_t> occupied;
    for (std::size_t i = 0; i < mu.counts.size(); ++i)
        if (mu.counts[i] > 0) occupied.push_back(i);
    const auto row_options = enumerate_PN(num_actions, n, cap);
    unsigned __int128 total = 1;
    for (std::size_t r = 0; r < occupied.size(); ++r) {
        total *= row_options.size();
        if (total > cap)
            throw Error(ErrorKind::CapExceeded, "agent rule count exceeds cap " + std::to_string(cap));
    }
    std::vector<AgentRule> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<std::size_t> idx(occupied.size(), 0);
    for (;;) {
        AgentRule rule;
        rule.num_cells = mu.counts.size();
        rule.num_actions = num_actions;
        rule.denominator = n;
        rule.numerators.assign(rule.num_cells * num_actions, 0);
        for (std::size_t r = 0; r < occupied.size(); ++r) {
            const auto& row = row_options[idx[r]].counts;
            std::copy(row.begin(), row.end(), rule.numerators.begin() + occupied[r] * num_actions);
        }
        out.push_back(std::move(rule));
        std::size_t r = occupied.size();
        bool done = true;
        while (r-- > 0) {
            if (++idx[r] < row_options.size()) {
                done = false;
                break;
            }
            idx[r] = 0;
        }
        if (done) break;
    }
    return out;
}

namespace {

// c(x_j, u_k, mu) for every (cell, action) at one measure state.
std::vector<double> cost_table(const AgentModel& model, const StateGrid& grid,
                               const ActionGrid& action_grid, std::span<const double> mu) {
    const std::size_t M = grid.size(), K = action_grid.size();
    const MeanField mf = MeanField::from_weights(grid.representatives(), mu);
    std::vector<double> C(M * K, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
        if (mu[j] == 0.0) continue;
        for (std::size_t k = 0; k < K; ++k)
            C[j * K + k] = model.stage_cost(grid.representative(j), action_grid.atom(k), mf);
    }
    return C;
}

double rule_cost_from_table(const std::vector<double>& C, std::size_t M, std::size_t K,
                            std::span<const double> mu, const ConditionalKernel& gamma) {
    double s = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        if (mu[j] == 0.0) continue;
        double inner = 0.0;
        for (std::size_t k = 0; k < K; ++k) inner += C[j * K + k] * gamma(j, k);
        s += inner * mu[j];
    }
    return s;
}

FiniteMeasureMDP build_population_mdp(MdpKind kind, const AgentModel& model, const StateGrid& grid,
                                      const ActionGrid& action_grid, int n, const McConfig& mc) {
    check_inputs(model, grid, action_grid);
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    const std::size_t M = grid.size(), K = action_grid.size();

    FiniteMeasureMDP mdp;
    mdp.beta = model.beta;
    mdp.meta = base_meta(kind, model, grid, action_grid, n, mc);
    mdp.meta.rule_resolution = fraction(n);
    mdp.states = enumerate_PN(M, n, mc.cap);
    const std::size_t S = mdp.states.size();
    mdp.actions.resize(S);
    mdp.cost.resize(S);
    mdp.kernel.resize(S);

    std::uint64_t pairs = 0;
    for (std::size_t s = 0; s < S; ++s) {
        for (auto& rule : enumerate_agent_rules(mdp.states[s], K, n, mc.cap)) mdp.actions[s].emplace_back(std::move(rule));
        pairs += mdp.actions[s].size();
        if (pairs > mc.cap) throw Error(ErrorKind::CapExceeded, "too many (state, rule) pairs");
    }

    std::vector<char> used_mc(S, 0);
    parallel_for(S, [&](std::size_t s) {
        const auto mu = mdp.states[s].weights();
        const SimplexMeasure mu_s = [&] {
            SimplexMeasure m;
            m.weights = mu;
            return m;
        }();

        // common-noise values and weights for this state
        std::vector<Vec> w0s;
        std::vector<double> w0p;
        if (model.common_noise.is_finite()) {
            for (const auto& a : model.common_noise.atoms()) {
                if (a.prob == 0.0) continue;
                w0s.push_back(a.value);
                w0p.push_back(a.prob);
            }
        } else {
            Rng rng = make_stream(mc.seed, {0x77306e6fULL, s});
            for (int r = 0; r < mc.samples; ++r) {
                w0s.push_back(model.common_noise.sample(rng));
                w0p.push_back(1.0 / mc.samples);
            }
            used_mc[s] = 1;
        }
        std::vector<std::vector<double>> Ts;
        for (std::size_t r = 0; r < w0s.size(); ++r) {
            bool f = false;
            Ts.push_back(cell_transitions(model, grid, action_grid, mu_s, w0s[r], mc,
                                          (static_cast<std::uint64_t>(s) << 32) ^ r, &f));
            if (f) used_mc[s] = 1;
        }
        const auto C = cost_table(model, grid, action_grid, mu);

        const std::size_t A = mdp.actions[s].size();
        mdp.cost[s].resize(A);
        mdp.kernel[s].resize(A);
        std::vector<double> dense(S);
        for (std::size_t a = 0; a < A; ++a) {
            const ConditionalKernel gamma = action_kernel(mdp.actions[s][a]);
            mdp.cost[s][a] = rule_cost_from_table(C, M, K, mu, gamma);
            std::fill(dense.begin(), dense.end(), 0.0);
            for (std::size_t r = 0; r < w0s.size(); ++r) {
                const SimplexMeasure nu = flow_from_transitions(Ts[r], M, K, mu, gamma);
                if (kind == MdpKind::Aggregation) {
                    dense[nearest_empirical_index(nu.weights, mdp.states)] += w0p[r];
                } else {
                    for (std::size_t t = 0; t < S; ++t)
                        dense[t] += w0p[r] * multinomial_probability(mdp.states[t].counts, nu.weights);
                }
            }
            mdp.kernel[s][a] = to_sparse(dense);
        }
    });
    mdp.meta.exact = std::none_of(used_mc.begin(), used_mc.end(), [](char c) { return c != 0; });
    return mdp;
}

}  // namespace

double rule_stage_cost(const AgentModel& model, const StateGrid& grid, const ActionGrid& action_grid,
                       const SimplexMeasure& mu, const ConditionalKernel& gamma) {
    const auto C = cost_table(model, grid, action_grid, mu.weights);
    return rule_cost_from_table(C, grid.size(), action_grid.size(), mu.weights, gamma);
}

FiniteMeasureMDP build_aggregation_mdp(const AgentModel& model, const StateGrid& grid,
                                       const ActionGrid& action_grid, int n, const McConfig& mc) {
    return build_population_mdp(MdpKind::Aggregation, model, grid, action_grid, n, mc);
}

FiniteMeasureMDP build_sampling_mdp(const AgentModel& model, const StateGrid& grid,
                                    const ActionGrid& action_grid, int n, const McConfig& mc) {
    return build_population_mdp(MdpKind::Sampling, model, grid, action_grid, n, mc);
}

double multinomial_probability(std::span<const int> counts, std::span<const double> nu) {
    if (counts.size() != nu.size()) throw Error(ErrorKind::SupportMismatch, "count and weight supports differ");
    // coefficient as a product of binomials, each exact below 2^53
    double coef = 1.0;
    int remaining = std::accumulate(counts.begin(), counts.end(), 0);
    double p = 1.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        if (nu[i] == 0.0) return 0.0;
        double b = 1.0;
        for (int j = 1; j <= counts[i]; ++j) b = b * (remaining - counts[i] + j) / j;
        coef *= b;
        remaining -= counts[i];
        p *= std::pow(nu[i], counts[i]);
    }
    return coef * p;
}

}  // namespace mfc
