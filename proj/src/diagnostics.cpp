#include "mfc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "mfc/error.hpp"
#include "mfc/parallel.hpp"
#include "mfc/rng.hpp"
#include "mfc/serialize.hpp"

namespace mfc {

namespace {

double contraction_gap(double K_f, double beta) {
    const double q = 2.0 * K_f * beta;
    if (!(q < 1.0))
        throw Error(ErrorKind::ContractionViolated,
                    "2 K_f beta = " + format_double(q) + " is not below 1");
    return 1.0 - q;
}

}  // namespace

double bound_action(double K_c, double K_f, double beta, double L_U) {
    return K_c / (contraction_gap(K_f, beta) * (1.0 - beta)) * L_U;
}

double bound_discretization(double K_c, double K_f, double beta, double L_X) {
    return 2.0 * K_c / ((1.0 - beta) * contraction_gap(K_f, beta)) * L_X;
}

double bound_regret(double K_c, double K_f, double beta, double L_X) {
    return 4.0 * K_c / ((1.0 - beta) * (1.0 - beta) * contraction_gap(K_f, beta)) * L_X;
}

double bound_value_lipschitz(double K_c, double K_f, double beta) {
    return 2.0 * K_c / contraction_gap(K_f, beta);
}

void write_bound_csv_header(std::ostream& os) { os << "name,lhs,rhs,satisfied,inputs\n"; }

void write_bound_csv(std::ostream& os, const BoundReport& report) {
    os << report.name << ',' << format_double(report.lhs) << ',' << format_double(report.rhs) << ','
       << (report.satisfied ? "true" : "false") << ',';
    bool first = true;
    for (const auto& [k, v] : report.inputs) {
        os << (first ? "" : ";") << k << '=' << format_double(v);
        first = false;
    }
    os << '\n';
}

std::vector<std::vector<double>> simplex_search_points(std::size_t M, const SimplexSearch& search) {
    if (M < 1) throw Error(ErrorKind::InvalidArgument, "support size must be >= 1");
    std::vector<std::vector<double>> pts;
    if (search.mode == SimplexSearch::Mode::Grid) {
        if (!(search.resolution > 0.0)) throw Error(ErrorKind::InvalidArgument, "resolution must be > 0");
        const double steps = 1.0 / search.resolution;
        const long k = std::lround(steps);
        if (k < 1 || std::abs(steps - static_cast<double>(k)) > 1e-6 * steps)
            throw Error(ErrorKind::InvalidArgument, "1/resolution must be an integer");
        for (const auto& mu : enumerate_PN(M, static_cast<int>(k))) pts.push_back(mu.weights());
        return pts;
    }
    if (search.samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
    Rng rng = make_stream(search.seed, {0x73696d70ULL});
    for (int s = 0; s < search.samples; ++s) {
        std::vector<double> w(M);
        double total = 0.0;
        for (double& v : w) {
            v = -std::log(1.0 - uniform01(rng));
            total += v;
        }
        for (double& v : w) v /= total;
        pts.push_back(std::move(w));
    }
    return pts;
}

ErrorConstant estimate_m_n(std::size_t M, int n, const SimplexSearch& search) {
    const auto pts = simplex_search_points(M, search);
    const auto space = enumerate_PN(M, n);
    std::vector<double> err(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        const auto& nearest = space[nearest_empirical_index(pts[i], space)];
        err[i] = w1_discrete(pts[i], nearest.weights());
    });
    ErrorConstant out;
    out.points_searched = pts.size();
    const auto it = std::max_element(err.begin(), err.end());
    out.value = *it;
    out.argmax = pts[static_cast<std::size_t>(it - err.begin())];
    return out;
}

SamplingError expected_sampling_error(std::span<const double> mu, int n, int samples, std::uint64_t seed) {
    if (n < 1 || samples < 1) throw Error(ErrorKind::InvalidArgument, "need n >= 1 and samples >= 1");
    Rng rng = make_stream(seed, {0x73616d70ULL});
    double sum = 0.0, sumsq = 0.0;
    std::vector<int> counts(mu.size());
    std::vector<double> w(mu.size());
    for (int s = 0; s < samples; ++s) {
        std::fill(counts.begin(), counts.end(), 0);
        for (int d = 0; d < n; ++d) ++counts[draw_categorical(rng, mu)];
        for (std::size_t j = 0; j < w.size(); ++j) w[j] = static_cast<double>(counts[j]) / n;
        const double e = w1_discrete(mu, w);
        sum += e;
        sumsq += e * e;
    }
    SamplingError out;
    out.mean = sum / samples;
    if (samples > 1) {
        const double var = std::max(0.0, (sumsq - samples * out.mean * out.mean) / (samples - 1));
        out.std_error = std::sqrt(var / samples);
    }
    return out;
}

ErrorConstant estimate_M_n(std::size_t M, int n, int samples, const SimplexSearch& search) {
    const auto pts = simplex_search_points(M, search);
    std::vector<SamplingError> err(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        err[i] = expected_sampling_error(pts[i], n, samples, stream_seed(search.seed, {i}));
    });
    ErrorConstant out;
    out.points_searched = pts.size();
    std::size_t best = 0;
    for (std::size_t i = 1; i < err.size(); ++i)
        if (err[i].mean > err[best].mean) best = i;
    out.value = err[best].mean;
    out.argmax = pts[best];
    out.argmax_std_error = err[best].std_error;
    return out;
}

BoundReport check_value_lipschitz(const FiniteMeasureMDP& mdp, const ValueFunction& values, double K_c,
                                  double K_f, int pairs, std::uint64_t seed) {
    BoundReport rep;
    rep.name = "value_lipschitz";
    rep.rhs = bound_value_lipschitz(K_c, K_f, mdp.beta);
    rep.inputs = {{"K_c", K_c}, {"K_f", K_f}, {"beta", mdp.beta}, {"pairs", static_cast<double>(pairs)}};
    const std::size_t S = mdp.num_states();
    if (values.values.size() != S) throw Error(ErrorKind::SizeMismatch, "value vector does not match the MDP");
    if (S < 2 || pairs < 1) {
        rep.satisfied = true;
        return rep;
    }
    auto cloud = [&](std::size_t s) {
        PointCloudMeasure c;
        const auto& counts = mdp.states[s].counts;
        for (std::size_t j = 0; j < counts.size(); ++j)
            for (int k = 0; k < counts[j]; ++k) c.points.push_back(mdp.meta.representatives.at(j));
        return c;
    };
    Rng rng = make_stream(seed, {0x6c697063ULL});
    double worst = 0.0;
    for (int p = 0; p < pairs; ++p) {
        const std::size_t a = std::min<std::size_t>(static_cast<std::size_t>(uniform01(rng) * S), S - 1);
        std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(uniform01(rng) * (S - 1)), S - 2);
        if (b >= a) ++b;
        const double dist = mdp.meta.kind == MdpKind::FinitePopulation
                                ? w1_matching(cloud(a), cloud(b))
                                : w1_discrete(mdp.states[a], mdp.states[b]);
        const double gap = std::abs(values.values[a] - values.values[b]);
        if (!(dist > 0.0)) {
            if (gap > 0.0) {
                worst = std::numeric_limits<double>::infinity();
                rep.witness = "states " + std::to_string(a) + " and " + std::to_string(b) +
                              " are at distance 0 with value gap " + format_double(gap);
            }
            continue;
        }
        const double ratio = gap / dist;
        if (ratio > worst) {
            worst = ratio;
            if (ratio > rep.rhs)
                rep.witness = "states " + std::to_string(a) + " and " + std::to_string(b) + ": |dV| = " +
                              format_double(gap) + ", W1 = " + format_double(dist);
        }
    }
    rep.lhs = worst;
    rep.satisfied = worst <= rep.rhs;
    if (rep.satisfied) rep.witness.clear();
    return rep;
}

}  // namespace mfc
