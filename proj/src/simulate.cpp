#include "mfc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mfc/error.hpp"
#include "mfc/parallel.hpp"
#include "mfc/rng.hpp"
#include "mfc/serialize.hpp"

namespace mfc {

const char* to_string(Feedback f) {
    switch (f) {
        case Feedback::FullMeasure: return "full";
        case Feedback::Aggregated: return "aggregated";
        case Feedback::Sampled: return "sampled";
    }
    return "?";
}

Feedback feedback_from_string(const std::string& s) {
    if (s == "full") return Feedback::FullMeasure;
    if (s == "aggregated") return Feedback::Aggregated;
    if (s == "sampled") return Feedback::Sampled;
    throw Error(ErrorKind::Config, "unknown feedback channel '" + s + "'");
}

double estimate_cost_sup(const AgentModel& model, const StateGrid& grid, const ActionGrid& action_grid) {
    const auto& reps = grid.representatives();
    std::vector<MeanField> fields;
    for (std::size_t j = 0; j < reps.size(); ++j) {
        std::vector<double> w(reps.size(), 0.0);
        w[j] = 1.0;
        fields.push_back(MeanField::from_weights(reps, w));
    }
    fields.push_back(MeanField::from_weights(reps, std::vector<double>(reps.size(), 1.0 / reps.size())));
    double sup = 0.0;
    for (const auto& x : reps)
        for (const auto& u : action_grid.atoms)
            for (const auto& mf : fields) sup = std::max(sup, std::abs(model.stage_cost(x, u, mf)));
    return sup;
}

int horizon_for_tolerance(double beta, double cost_sup, double tol) {
    if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::InvalidArgument, "beta must lie in (0,1)");
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be > 0");
    double tail = cost_sup / (1.0 - beta);
    int T = 0;
    while (tail > tol) {
        tail *= beta;
        if (++T > 100'000) throw Error(ErrorKind::InvalidArgument, "horizon exceeds 100000 steps");
    }
    return T;
}

namespace {

// Integer split of `count` agents proportional to probs (largest remainder,
// lowest index first on equal remainders).
std::vector<int> apportion(int count, std::span<const double> probs) {
    std::vector<int> out(probs.size(), 0);
    std::vector<std::pair<double, std::size_t>> rem;
    int used = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        const double exact = count * probs[k];
        // tolerate rounding just below an integer
        out[k] = static_cast<int>(std::floor(exact + 1e-9));
        used += out[k];
        rem.push_back({exact - out[k], k});
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; used < count; ++i, ++used) out[rem[i % rem.size()].second] += 1;
    return out;
}


}  // namespace

CostEstimate rollout_team(const AgentModel& model, const StateGrid& grid, const ActionGrid& action_grid,
                          const AgentPolicy& policy, const PointCloudMeasure& init, const RolloutConfig& cfg,
                          TrajectorySink trajectory) {
    const int N = cfg.agents;
    if (N < 1 || cfg.rollouts < 1 || cfg.horizon < 0)
        throw Error(ErrorKind::InvalidArgument, "rollout needs agents >= 1, rollouts >= 1, horizon >= 0");
    if (init.size() != static_cast<std::size_t>(N))
        throw Error(ErrorKind::SizeMismatch, "initial cloud has " + std::to_string(init.size()) +
                                                 " points, expected " + std::to_string(N));
    const std::size_t M = grid.size();
    const std::size_t K = action_grid.size();
    if (policy.num_cells != M || policy.num_actions != K)
        throw Error(ErrorKind::InvalidArgument, "policy dimensions do not match the grid");
    const int n = cfg.feedback == Feedback::FullMeasure ? N : cfg.feedback_n;
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "feedback_n must be >= 1");
    if (policy.population != n)
        throw Error(ErrorKind::InvalidArgument, "policy population " + std::to_string(policy.population) +
                                                    " does not match the feedback size " + std::to_string(n));
    if (policy.num_states() != count_PN(M, n))
        throw Error(ErrorKind::InvalidArgument, "policy does not cover the feedback state space");
    std::vector<EmpiricalMeasure> space;
    if (cfg.feedback == Feedback::Aggregated) space = enumerate_PN(M, n);

    const double cost_sup = cfg.cost_sup ? *cfg.cost_sup : estimate_cost_sup(model, grid, action_grid);
    const std::size_t R = static_cast<std::size_t>(cfg.rollouts);
    std::vector<double> totals(R, 0.0);
    std::vector<std::string> dumps(trajectory.out ? R : 0);

    parallel_for(R, [&](std::size_t r) {
        Rng rng = make_stream(cfg.seed, {0x726f6c6cULL, r});
        std::vector<Vec> x = init.points;
        std::vector<Vec> next(N);
        std::vector<std::size_t> cell(N), act(N);
        std::vector<std::size_t> observed;
        std::ostringstream dump;
        const bool dumping = trajectory.out && static_cast<int>(r) < trajectory.max_rollouts;
        double discount = 1.0, total = 0.0;
        for (int t = 0; t < cfg.horizon; ++t) {
            for (int i = 0; i < N; ++i) cell[i] = grid.quantize(x[i]);

            std::vector<int> counts(M, 0);
            if (cfg.feedback == Feedback::Sampled) {
                if (cfg.resample_each_step || t == 0) {
                    observed.resize(n);
                    for (int j = 0; j < n; ++j)
                        observed[j] = std::min<std::size_t>(static_cast<std::size_t>(uniform01(rng) * N), N - 1);
                }
                for (std::size_t j : observed) ++counts[cell[j]];
            } else {
                for (int i = 0; i < N; ++i) ++counts[cell[i]];
            }
            std::size_t state = 0;
            if (cfg.feedback == Feedback::Aggregated) {
                std::vector<double> w(M);
                for (std::size_t j = 0; j < M; ++j) w[j] = static_cast<double>(counts[j]) / N;
                state = nearest_empirical_index(w, space);
            } else {
                state = rank_PN(counts);
            }
            if (state >= policy.num_states())
                throw Error(ErrorKind::UnreachableState, "feedback state " + std::to_string(state) + " has no policy entry");

            const Vec w0 = model.common_noise.sample(rng);
            if (cfg.realization == Realization::Independent) {
                for (int i = 0; i < N; ++i) act[i] = draw_categorical(rng, policy.rule(state, cell[i]));
            } else {
                for (std::size_t j = 0; j < M; ++j) {
                    std::vector<std::size_t> members;
                    for (int i = 0; i < N; ++i)
                        if (cell[i] == j) members.push_back(static_cast<std::size_t>(i));
                    if (members.empty()) continue;
                    // Fisher-Yates shuffle, then hand out actions in order
                    for (std::size_t m = members.size(); m-- > 1;) {
                        const std::size_t pick = std::min<std::size_t>(
                            static_cast<std::size_t>(uniform01(rng) * (m + 1)), m);
                        std::swap(members[m], members[pick]);
                    }
                    const std::vector<int> split =
                        apportion(static_cast<int>(members.size()), policy.rule(state, j));
                    std::size_t pos = 0;
                    for (std::size_t k = 0; k < K; ++k)
                        for (int c = 0; c < split[k]; ++c) act[members[pos++]] = k;
                }
            }

            const MeanField mf = MeanField::from_cloud(x);
            double step = 0.0;
            for (int i = 0; i < N; ++i) {
                const Vec& u = action_grid.atom(act[i]);
                const double c = model.stage_cost(x[i], u, mf);
                step += c;
                if (dumping) {
                    dump << t << ',' << r << ',' << i;
                    for (double v : x[i]) dump << ',' << format_double(v);
                    for (double v : u) dump << ',' << format_double(v);
                    dump << ',' << format_double(c) << '\n';
                }
                next[i] = model.dynamics(x[i], u, mf, model.idio_noise.sample(rng), w0);
            }
            total += discount * step / N;
            discount *= model.beta;
            x.swap(next);
        }
        totals[r] = total;
        if (dumping) dumps[r] = dump.str();
    });

    if (trajectory.out)
        for (const auto& d : dumps) *trajectory.out << d;

    CostEstimate est;
    est.per_rollout = totals;
    est.mean = std::accumulate(totals.begin(), totals.end(), 0.0) / static_cast<double>(R);
    if (R > 1) {
        double ss = 0.0;
        for (double v : totals) ss += (v - est.mean) * (v - est.mean);
        est.std_error = std::sqrt(ss / static_cast<double>(R - 1) / static_cast<double>(R));
    }
    est.truncation_bound = std::pow(model.beta, cfg.horizon) * cost_sup / (1.0 - model.beta);
    return est;
}

std::size_t oracle_vector_index(std::span<const std::size_t> cells, std::size_t num_cells) {
    std::size_t idx = 0, scale = 1;
    for (std::size_t c : cells) {
        idx += c * scale;
        scale *= num_cells;
    }
    return idx;
}

OracleResult brute_force_oracle(const AgentModel& model, const StateGrid& grid, const ActionGrid& action_grid,
                                int N, double beta, double tol, std::uint64_t cap) {
    if (N < 1) throw Error(ErrorKind::InvalidArgument, "oracle needs N >= 1");
    if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::InvalidArgument, "beta must lie in (0,1)");
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be > 0");
    if (!model.idio_noise.is_finite() || !model.common_noise.is_finite())
        throw Error(ErrorKind::InvalidArgument, "oracle requires finite noise");
    const std::size_t M = grid.size();
    const std::size_t K = action_grid.size();
    double size = 1.0;
    std::size_t S = 1, A = 1;
    for (int i = 0; i < N; ++i) {
        size *= static_cast<double>(M * K);
        S *= M;
        A *= K;
    }
    if (size > static_cast<double>(cap))
        throw Error(ErrorKind::CapExceeded, "oracle needs " + std::to_string(size) + " state-action pairs");

    const auto& idio = model.idio_noise.atoms();
    const auto& common = model.common_noise.atoms();
    std::size_t combos = 1;
    for (int i = 0; i < N; ++i) combos *= idio.size();

    // dense per-(state, joint action) data
    std::vector<double> cost(S * A, 0.0);
    std::vector<std::vector<std::pair<std::size_t, double>>> trans(S * A);
    parallel_for(S * A, [&](std::size_t job) {
        const std::size_t s = job / A, a = job % A;
        std::vector<std::size_t> cells(N), acts(N);
        for (std::size_t i = 0, rest = s; i < static_cast<std::size_t>(N); ++i, rest /= M) cells[i] = rest % M;
        for (std::size_t i = 0, rest = a; i < static_cast<std::size_t>(N); ++i, rest /= K) acts[i] = rest % K;
        std::vector<Vec> pts(N);
        for (int i = 0; i < N; ++i) pts[i] = grid.representative(cells[i]);
        const MeanField mf = MeanField::from_cloud(pts);
        double c = 0.0;
        for (int i = 0; i < N; ++i) c += model.stage_cost(pts[i], action_grid.atom(acts[i]), mf);
        cost[job] = c / N;

        std::vector<double> dense(S, 0.0);
        std::vector<std::size_t> pick(N), dest(N);
        for (const auto& w0 : common) {
            // next cell of each agent under each idiosyncratic atom
            std::vector<std::vector<std::size_t>> moved(N, std::vector<std::size_t>(idio.size()));
            for (int i = 0; i < N; ++i)
                for (std::size_t w = 0; w < idio.size(); ++w)
                    moved[i][w] = grid.quantize(
                        model.dynamics(pts[i], action_grid.atom(acts[i]), mf, idio[w].value, w0.value));
            for (std::size_t combo = 0; combo < combos; ++combo) {
                double p = w0.prob;
                for (std::size_t i = 0, rest = combo; i < static_cast<std::size_t>(N); ++i, rest /= idio.size()) {
                    pick[i] = rest % idio.size();
                    p *= idio[pick[i]].prob;
                    dest[i] = moved[i][pick[i]];
                }
                if (p > 0.0) dense[oracle_vector_index(dest, M)] += p;
            }
        }
        for (std::size_t t = 0; t < S; ++t)
            if (dense[t] > 0.0) trans[job].push_back({t, dense[t]});
    });

    OracleResult out;
    out.num_cells = M;
    out.agents = N;
    std::vector<double> v(S, 0.0), nv(S, 0.0);
    const double threshold = tol * (1.0 - beta) / beta;
    for (int it = 0; it < 1'000'000; ++it) {
        double gap = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < A; ++a) {
                double q = 0.0;
                for (const auto& [t, p] : trans[s * A + a]) q += p * v[t];
                best = std::min(best, cost[s * A + a] + beta * q);
            }
            nv[s] = best;
            gap = std::max(gap, std::abs(nv[s] - v[s]));
        }
        v.swap(nv);
        out.iterations = it + 1;
        if (gap <= threshold) break;
    }
    out.vector_values = v;

    const std::size_t P = count_PN(M, N);
    std::vector<double> lo(P, std::numeric_limits<double>::infinity());
    std::vector<double> hi(P, -std::numeric_limits<double>::infinity());
    out.measure_values.assign(P, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        std::vector<int> counts(M, 0);
        for (std::size_t i = 0, rest = s; i < static_cast<std::size_t>(N); ++i, rest /= M) ++counts[rest % M];
        const std::size_t p = rank_PN(counts);
        lo[p] = std::min(lo[p], v[s]);
        hi[p] = std::max(hi[p], v[s]);
    }
    // report the sorted cloud's value for each distribution
    for (const auto& mu : enumerate_PN(M, N)) {
        std::vector<std::size_t> cells;
        for (std::size_t j = 0; j < M; ++j)
            for (int c = 0; c < mu.counts[j]; ++c) cells.push_back(j);
        const std::size_t p = rank_PN(mu.counts);
        out.measure_values[p] = v[oracle_vector_index(cells, M)];
        out.max_permutation_spread = std::max(out.max_permutation_spread, hi[p] - lo[p]);
    }
    return out;
}

RegretReport regret(const AgentModel& model, const StateGrid& grid, const ActionGrid& action_grid,
                    const AgentPolicy& policy, const PointCloudMeasure& init, const RolloutConfig& cfg,
                    double baseline, double baseline_tol) {
    RegretReport rep;
    rep.estimate = rollout_team(model, grid, action_grid, policy, init, cfg);
    rep.baseline = baseline;
    rep.regret = rep.estimate.mean - baseline;
    rep.tolerance = 3.0 * rep.estimate.std_error + rep.estimate.truncation_bound + baseline_tol;
    return rep;
}

}  // namespace mfc
