#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mfc/grid.hpp"
#include "mfc/model.hpp"

namespace mfc {

/// Default cap on the size of any enumerated measure or action space.
inline constexpr std::uint64_t kDefaultEnumerationCap = 5'000'000;

/// N agents counted over an indexed support of size M.
struct EmpiricalMeasure {
    std::vector<int> counts;
    int total = 0;

    EmpiricalMeasure() = default;
    explicit EmpiricalMeasure(std::vector<int> c);

    std::size_t support_size() const { return counts.size(); }
    double weight(std::size_t i) const { return static_cast<double>(counts[i]) / total; }
    std::vector<double> weights() const;
    friend bool operator==(const EmpiricalMeasure&, const EmpiricalMeasure&) = default;
};

/// Probability vector over an indexed support.
struct SimplexMeasure {
    std::vector<double> weights;

    SimplexMeasure() = default;
    /// Error(InvalidArgument) unless weights are >= 0 and sum to 1 within 1e-12.
    explicit SimplexMeasure(std::vector<double> w);
    static SimplexMeasure from(const EmpiricalMeasure& mu);

    std::size_t support_size() const { return weights.size(); }
};

/// Joint (state-atom, action-atom) counts; row sums give the state marginal.
struct JointEmpiricalMeasure {
    std::size_t num_cells = 0;
    std::size_t num_actions = 0;
    std::vector<int> counts;  // row-major [cell][action]
    int total = 0;

    int at(std::size_t cell, std::size_t action) const { return counts[cell * num_actions + action]; }
    int row_sum(std::size_t cell) const;
    EmpiricalMeasure marginal() const;
    friend bool operator==(const JointEmpiricalMeasure&, const JointEmpiricalMeasure&) = default;
};

/// Cloud of N points in R^l.
struct PointCloudMeasure {
    std::vector<Vec> points;

    std::size_t size() const { return points.size(); }
};

/// Conditional kernel gamma(u | x) as a row-stochastic [cell][action] table.
struct ConditionalKernel {
    std::size_t num_cells = 0;
    std::size_t num_actions = 0;
    std::vector<double> probs;

    double operator()(std::size_t cell, std::size_t action) const {
        return probs[cell * num_actions + action];
    }
    std::span<const double> row(std::size_t cell) const {
        return {probs.data() + cell * num_actions, num_actions};
    }
};

/// Multiset coefficient C(N+M-1, M-1): the number of N-agent empirical
/// measures on M atoms. Saturates at UINT64_MAX.
std::uint64_t count_PN(std::size_t M, int N);

/// All count vectors of length M summing to N, lexicographically decreasing.
/// Error(CapExceeded) reporting the exact count when it exceeds `cap`.
std::vector<EmpiricalMeasure> enumerate_PN(std::size_t M, int N,
                                           std::uint64_t cap = kDefaultEnumerationCap);

/// Position of `counts` in the enumerate_PN order, without enumerating.
std::size_t rank_PN(std::span<const int> counts);

/// Sum of coordinate gaps, sum_i |a_i - b_i|: Wasserstein-1 under the 0/1
/// metric on the support, counted twice. Error(SupportMismatch).
double w1_discrete(std::span<const double> a, std::span<const double> b);
double w1_discrete(const SimplexMeasure& a, const SimplexMeasure& b);
double w1_discrete(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// Minimal average Euclidean matching cost between equal-size clouds.
/// Sorted pairing in 1-D, Hungarian assignment otherwise. Error(SizeMismatch).
double w1_matching(const PointCloudMeasure& a, const PointCloudMeasure& b);

/// Nearest n-agent empirical measure to mu under w1_discrete; ties go to the
/// lowest enumeration index. Error(CapExceeded).
EmpiricalMeasure nearest_empirical(const SimplexMeasure& mu, int n,
                                   std::uint64_t cap = kDefaultEnumerationCap);

/// Same map as nearest_empirical against a pre-enumerated P_n (hot loops).
std::size_t nearest_empirical_index(std::span<const double> mu,
                                    const std::vector<EmpiricalMeasure>& space);

/// Counts of cloud points per grid cell. Error(OutOfBounds).
EmpiricalMeasure project_to_grid(const PointCloudMeasure& mu, const StateGrid& grid);

/// Product over occupied cells of C(count + K - 1, K - 1), saturating.
std::uint64_t count_admissible_actions(const EmpiricalMeasure& mu, std::size_t num_actions);

/// All joint count matrices whose row sums equal mu's counts. Rows are
/// varied last-cell-fastest, each row in enumerate_PN order.
std::vector<JointEmpiricalMeasure> admissible_actions(const EmpiricalMeasure& mu,
                                                      std::size_t num_actions,
                                                      std::uint64_t cap = kDefaultEnumerationCap);

/// gamma(u|x) = counts(x,u)/rowsum(x) on occupied rows, uniform on empty rows.
ConditionalKernel disintegrate(const JointEmpiricalMeasure& theta);

/// Representative cloud: counts[i] copies of representative i, in cell order.
PointCloudMeasure representative_cloud(const EmpiricalMeasure& mu, const StateGrid& grid);

/// Plain-text measure record: a header line "empirical <M> <N>" or
/// "simplex <M>", then one "<index> <value>" line per atom.
void write_measure(std::ostream& os, const EmpiricalMeasure& mu);
void write_measure(std::ostream& os, const SimplexMeasure& mu);
EmpiricalMeasure read_empirical(std::istream& is);
SimplexMeasure read_simplex(std::istream& is);

}  // namespace mfc
