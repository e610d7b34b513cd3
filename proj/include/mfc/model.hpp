#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mfc/rng.hpp"

namespace mfc {

using Vec = std::vector<double>;

/// Closed axis-aligned box [lower, upper] in R^d.
struct Box {
    Vec lower;
    Vec upper;

    std::size_t dim() const { return lower.size(); }
    bool contains(std::span<const double> x, double slack = 0.0) const;
};

/// Weighted atoms handed to the dynamics and cost as the mean-field term.
/// An N-agent cloud has N atoms of weight 1/N; a measure on grid
/// representatives has one atom per cell.
struct MeanField {
    std::vector<Vec> points;
    std::vector<double> weights;

    static MeanField from_cloud(std::span<const Vec> cloud);
    /// Atoms at `support` weighted by `weights`; zero-weight atoms are dropped.
    static MeanField from_weights(std::span<const Vec> support, std::span<const double> weights);

    std::size_t size() const { return points.size(); }
    /// Mean of coordinate `axis`.
    double mean(std::size_t axis = 0) const;
    /// Integral of h against the measure.
    double integrate(const std::function<double(const Vec&)>& h) const;
};

struct NoiseAtom {
    Vec value;
    double prob = 0.0;
};

/// Noise source: either a finite support (exact expansion possible) or a
/// seedable sampler. A default-constructed Noise is "no noise": one empty atom.
class Noise {
public:
    Noise();
    static Noise none();
    static Noise finite(std::vector<NoiseAtom> atoms);
    static Noise sampled(std::function<Vec(Rng&)> sampler);

    bool is_finite() const { return !atoms_.empty(); }
    const std::vector<NoiseAtom>& atoms() const { return atoms_; }
    /// Draws one value. Finite supports consume exactly one engine call.
    Vec sample(Rng& rng) const;

private:
    std::vector<NoiseAtom> atoms_;
    std::vector<double> probs_;
    std::function<Vec(Rng&)> sampler_;
};

using Dynamics = std::function<Vec(const Vec& x, const Vec& u, const MeanField& mf,
                                   const Vec& w_idio, const Vec& w_common)>;
using StageCost = std::function<double(const Vec& x, const Vec& u, const MeanField& mf)>;

/// Weakly coupled agent model: every agent follows the same dynamics and
/// cost and interacts with the others only through the mean-field term.
struct AgentModel {
    std::string name;
    int state_dim = 1;
    int action_dim = 1;
    Dynamics dynamics;
    StageCost stage_cost;
    Noise idio_noise;
    Noise common_noise;
    double K_f = 0.0;
    double K_c = 0.0;
    double beta = 0.5;
    Box state_bounds;
    Box action_set;

    /// Checks the declared invariants (probabilities, beta, constants, boxes)
    /// and samples the dynamics to confirm outputs stay in state_bounds.
    /// Throws Error(InvalidArgument) on the first violation.
    void validate(std::uint64_t seed = 0, int samples = 256) const;
};

}  // namespace mfc
