#include "mfc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mfc/error.hpp"

namespace mfc {

EmpiricalMeasure::EmpiricalMeasure(std::vector<int> c) : counts(std::move(c)) {
    total = 0;
    for (int v : counts) {
        if (v < 0) throw Error(ErrorKind::InvalidArgument, "negative count");
        total += v;
    }
}

std::vector<double> EmpiricalMeasure::weights() const {
    std::vector<double> w(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) w[i] = weight(i);
    return w;
}

SimplexMeasure::SimplexMeasure(std::vector<double> w) : weights(std::move(w)) {
    double total = 0.0;
    for (double v : weights) {
        if (!(v >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative simplex weight");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw Error(ErrorKind::InvalidArgument, "simplex weights sum to " + std::to_string(total));
}

SimplexMeasure SimplexMeasure::from(const EmpiricalMeasure& mu) {
    SimplexMeasure s;
    s.weights = mu.weights();
    return s;
}

int JointEmpiricalMeasure::row_sum(std::size_t cell) const {
    int s = 0;
    for (std::size_t k = 0; k < num_actions; ++k) s += at(cell, k);
    return s;
}

EmpiricalMeasure JointEmpiricalMeasure::marginal() const {
    std::vector<int> c(num_cells);
    for (std::size_t i = 0; i < num_cells; ++i) c[i] = row_sum(i);
    return EmpiricalMeasure(std::move(c));
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > kSaturated) return kSaturated;
    }
    return static_cast<std::uint64_t>(r);
}

void enumerate_rec(std::vector<int>& cur, std::size_t pos, int remaining,
                   std::vector<EmpiricalMeasure>& out) {
    if (pos + 1 == cur.size()) {
        cur[pos] = remaining;
        out.emplace_back(cur);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur[pos] = v;
        enumerate_rec(cur, pos + 1, remaining - v, out);
    }
}

}  // namespace

std::uint64_t count_PN(std::size_t M, int N) {
    if (M == 0 || N < 0) return 0;
    return binomial(static_cast<std::uint64_t>(N) + M - 1, M - 1);
}

std::vector<EmpiricalMeasure> enumerate_PN(std::size_t M, int N, std::uint64_t cap) {
    if (M < 1 || N < 1) throw Error(ErrorKind::InvalidArgument, "enumerate_PN needs M >= 1 and N >= 1");
    const std::uint64_t count = count_PN(M, N);
    if (count > cap)
        throw Error(ErrorKind::CapExceeded, "|P_N| = " + std::to_string(count) + " for M=" +
                                                std::to_string(M) + ", N=" + std::to_string(N) +
                                                " exceeds cap " + std::to_string(cap));
    std::vector<EmpiricalMeasure> out;
    out.reserve(count);
    std::vector<int> cur(M, 0);
    enumerate_rec(cur, 0, N, out);
    return out;
}

std::size_t rank_PN(std::span<const int> counts) {
    const std::size_t M = counts.size();
    int remaining = std::accumulate(counts.begin(), counts.end(), 0);
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i + 1 < M; ++i) {
        const std::size_t parts = M - i - 1;
        for (int v = remaining; v > counts[i]; --v)
            rank += binomial(static_cast<std::uint64_t>(remaining - v) + parts - 1, parts - 1);
        remaining -= counts[i];
    }
    return static_cast<std::size_t>(rank);
}

double w1_discrete(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw Error(ErrorKind::SupportMismatch, "supports of size " + std::to_string(a.size()) +
                                                    " and " + std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

double w1_discrete(const SimplexMeasure& a, const SimplexMeasure& b) {
    return w1_discrete(a.weights, b.weights);
}

double w1_discrete(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    return w1_discrete(a.weights(), b.weights());
}

namespace {

double euclid(const Vec& a, const Vec& b) {
    double sq = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) sq += (a[d] - b[d]) * (a[d] - b[d]);
    return std::sqrt(sq);
}

// Minimum-cost perfect assignment on an n x n matrix (shortest augmenting
// paths with potentials), O(n^3).
double hungarian(const std::vector<double>& cost, std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) total += cost[(p[j] - 1) * n + (j - 1)];
    return total;
}

}  // namespace

double w1_matching(const PointCloudMeasure& a, const PointCloudMeasure& b) {
    if (a.size() != b.size())
        throw Error(ErrorKind::SizeMismatch, "clouds of size " + std::to_string(a.size()) + " and " +
                                                 std::to_string(b.size()));
    const std::size_t n = a.size();
    if (n == 0) return 0.0;
    if (a.points.front().size() == 1) {
        Vec xs, ys;
        for (const auto& p : a.points) xs.push_back(p[0]);
        for (const auto& p : b.points) ys.push_back(p[0]);
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::abs(xs[i] - ys[i]);
        return s / static_cast<double>(n);
    }
    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = euclid(a.points[i], b.points[j]);
    return hungarian(cost, n) / static_cast<double>(n);
}

std::size_t nearest_empirical_index(std::span<const double> mu,
                                    const std::vector<EmpiricalMeasure>& space) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < space.size(); ++e) {
        const auto& c = space[e].counts;
        if (c.size() != mu.size())
            throw Error(ErrorKind::SupportMismatch, "measure and P_n support differ");
        const double n = static_cast<double>(space[e].total);
        double d = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) d += std::abs(mu[i] - c[i] / n);
        // ties within rounding keep the earlier candidate
        if (d < best_d - 1e-12) {
            best_d = d;
            best = e;
        }
    }
    return best;
}

EmpiricalMeasure nearest_empirical(const SimplexMeasure& mu, int n, std::uint64_t cap) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    const auto space = enumerate_PN(mu.support_size(), n, cap);
    return space[nearest_empirical_index(mu.weights, space)];
}

EmpiricalMeasure project_to_grid(const PointCloudMeasure& mu, const StateGrid& grid) {
    std::vector<int> counts(grid.size(), 0);
    for (const auto& p : mu.points) ++counts[grid.quantize(p)];
    return EmpiricalMeasure(std::move(counts));
}

std::uint64_t count_admissible_actions(const EmpiricalMeasure& mu, std::size_t num_actions) {
    unsigned __int128 total = 1;
    for (int c : mu.counts) {
        if (c == 0) continue;
        total *= count_PN(num_actions, c);
        if (total > kSaturated) return kSaturated;
    }
    return static_cast<std::uint64_t>(total);
}

std::vector<JointEmpiricalMeasure> admissible_actions(const EmpiricalMeasure& mu,
                                                      std::size_t num_actions, std::uint64_t cap) {
    if (num_actions == 0) throw Error(ErrorKind::EmptyActionGrid, "no action atoms");
    const std::uint64_t count = count_admissible_actions(mu, num_actions);
    if (count > cap)
        throw Error(ErrorKind::CapExceeded,
                    "admissible action count " + std::to_string(count) + " exceeds cap " + std::to_string(cap));
    const std::size_t M = mu.counts.size();
    std::vector<std::size_t> occupied;
    std::vector<std::vector<EmpiricalMeasure>> row_options;
    for (std::size_t i = 0; i < M; ++i) {
        if (mu.counts[i] == 0) continue;
        occupied.push_back(i);
        row_options.push_back(enumerate_PN(num_actions, mu.counts[i], cap));
    }
    std::vector<JointEmpiricalMeasure> out;
    out.reserve(count);
    std::vector<std::size_t> idx(occupied.size(), 0);
    for (;;) {
        JointEmpiricalMeasure theta;
        theta.num_cells = M;
        theta.num_actions = num_actions;
        theta.counts.assign(M * num_actions, 0);
        theta.total = mu.total;
        for (std::size_t r = 0; r < occupied.size(); ++r) {
            const auto& row = row_options[r][idx[r]].counts;
            std::copy(row.begin(), row.end(), theta.counts.begin() + occupied[r] * num_actions);
        }
        out.push_back(std::move(theta));
        std::size_t r = occupied.size();
        bool done = true;
        while (r-- > 0) {
            if (++idx[r] < row_options[r].size()) {
                done = false;
                break;
            }
            idx[r] = 0;
        }
        if (done) break;
    }
    return out;
}

ConditionalKernel disintegrate(const JointEmpiricalMeasure& theta) {
    ConditionalKernel g;
    g.num_cells = theta.num_cells;
    g.num_actions = theta.num_actions;
    g.probs.assign(theta.num_cells * theta.num_actions, 0.0);
    for (std::size_t i = 0; i < theta.num_cells; ++i) {
        const int rs = theta.row_sum(i);
        for (std::size_t k = 0; k < theta.num_actions; ++k)
            g.probs[i * g.num_actions + k] =
                rs > 0 ? static_cast<double>(theta.at(i, k)) / rs : 1.0 / static_cast<double>(g.num_actions);
    }
    return g;
}

PointCloudMeasure representative_cloud(const EmpiricalMeasure& mu, const StateGrid& grid) {
    if (mu.counts.size() != grid.size())
        throw Error(ErrorKind::SupportMismatch, "measure support differs from grid size");
    PointCloudMeasure cloud;
    for (std::size_t i = 0; i < mu.counts.size(); ++i)
        for (int c = 0; c < mu.counts[i]; ++c) cloud.points.push_back(grid.representative(i));
    return cloud;
}

namespace {

std::string expect_header(std::istream& is, const std::string& tag) {
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word != tag) throw Error(ErrorKind::Io, "expected '" + tag + "' record, got '" + word + "'");
        std::string rest;
        std::getline(ls, rest);
        return rest;
    }
    throw Error(ErrorKind::Io, "missing '" + tag + "' record");
}

}  // namespace

void write_measure(std::ostream& os, const EmpiricalMeasure& mu) {
    os << "empirical " << mu.counts.size() << ' ' << mu.total << '\n';
    for (std::size_t i = 0; i < mu.counts.size(); ++i) os << i << ' ' << mu.counts[i] << '\n';
}

void write_measure(std::ostream& os, const SimplexMeasure& mu) {
    os << "simplex " << mu.weights.size() << '\n';
    const auto old = os.precision(17);
    for (std::size_t i = 0; i < mu.weights.size(); ++i) os << i << ' ' << mu.weights[i] << '\n';
    os.precision(old);
}

EmpiricalMeasure read_empirical(std::istream& is) {
    std::istringstream hs(expect_header(is, "empirical"));
    std::size_t M = 0;
    int N = 0;
    hs >> M >> N;
    std::vector<int> counts(M, 0);
    for (std::size_t r = 0; r < M; ++r) {
        std::size_t i = 0;
        int c = 0;
        if (!(is >> i >> c) || i >= M) throw Error(ErrorKind::Io, "bad empirical measure record");
        counts[i] = c;
    }
    EmpiricalMeasure mu(std::move(counts));
    if (mu.total != N) throw Error(ErrorKind::Io, "empirical measure total does not match header");
    return mu;
}

SimplexMeasure read_simplex(std::istream& is) {
    std::istringstream hs(expect_header(is, "simplex"));
    std::size_t M = 0;
    hs >> M;
    std::vector<double> w(M, 0.0);
    for (std::size_t r = 0; r < M; ++r) {
        std::size_t i = 0;
        double v = 0;
        if (!(is >> i >> v) || i >= M) throw Error(ErrorKind::Io, "bad simplex measure record");
        w[i] = v;
    }
    return SimplexMeasure(std::move(w));
}

}  // namespace mfc
