#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mfc/mdp.hpp"
#include "mfc/solver.hpp"

namespace mfc {

/// Closed-form near-optimality bounds. Each throws Error(ContractionViolated)
/// unless 2 K_f beta < 1.
double bound_action(double K_c, double K_f, double beta, double L_U);
double bound_discretization(double K_c, double K_f, double beta, double L_X);
double bound_regret(double K_c, double K_f, double beta, double L_X);
double bound_value_lipschitz(double K_c, double K_f, double beta);

struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    std::map<std::string, double> inputs;
    std::string witness;  // offending instance when not satisfied
};

/// CSV: name,lhs,rhs,satisfied,inputs (inputs as key=value;key=value).
void write_bound_csv_header(std::ostream& os);
void write_bound_csv(std::ostream& os, const BoundReport& report);

/// Search set over the simplex: either every point with coordinates in
/// multiples of `resolution` (1/resolution must be an integer), or `samples`
/// uniform (flat Dirichlet) draws.
struct SimplexSearch {
    enum class Mode { Grid, Sampled };
    Mode mode = Mode::Grid;
    double resolution = 1e-2;
    int samples = 1000;
    std::uint64_t seed = 0;

    static SimplexSearch grid(double resolution) { return {Mode::Grid, resolution, 0, 0}; }
    static SimplexSearch sampled(int samples, std::uint64_t seed) {
        return {Mode::Sampled, 0.0, samples, seed};
    }
};

std::vector<std::vector<double>> simplex_search_points(std::size_t M, const SimplexSearch& search);

struct ErrorConstant {
    double value = 0.0;  // lower bound on the supremum
    std::vector<double> argmax;
    std::size_t points_searched = 0;
    double argmax_std_error = 0.0;  // M_n only
};

/// max over searched points of w1_discrete(mu, nearest_empirical(mu, n)).
ErrorConstant estimate_m_n(std::size_t M, int n, const SimplexSearch& search);

struct SamplingError {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo mean of w1_discrete(mu, empirical measure of n draws from mu).
SamplingError expected_sampling_error(std::span<const double> mu, int n, int samples,
                                      std::uint64_t seed);

/// max over searched points of expected_sampling_error.
ErrorConstant estimate_M_n(std::size_t M, int n, int samples, const SimplexSearch& search);

/// Samples state pairs of a solved MDP and checks
/// |V(mu) - V(mu')| <= 2 K_c / (1 - 2 K_f beta) * W1(mu, mu'), with W1 from
/// matching representative clouds (finite-population models) or the
/// coordinate-gap formula (aggregation and sampling models).
/// lhs is the worst ratio |dV| / W1, rhs the Lipschitz constant.
BoundReport check_value_lipschitz(const FiniteMeasureMDP& mdp, const ValueFunction& values,
                                  double K_c, double K_f, int pairs, std::uint64_t seed);

}  // namespace mfc
