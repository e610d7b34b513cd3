#include "mfc/model.hpp"

#include <cmath>
#include <numeric>

#include "mfc/error.hpp"

namespace mfc {

bool Box::contains(std::span<const double> x, double slack) const {
    if (x.size() != lower.size()) return false;
    for (std::size_t d = 0; d < x.size(); ++d)
        if (!(x[d] >= lower[d] - slack && x[d] <= upper[d] + slack)) return false;
    return true;
}

MeanField MeanField::from_cloud(std::span<const Vec> cloud) {
    MeanField mf;
    mf.points.assign(cloud.begin(), cloud.end());
    mf.weights.assign(cloud.size(), cloud.empty() ? 0.0 : 1.0 / static_cast<double>(cloud.size()));
    return mf;
}

MeanField MeanField::from_weights(std::span<const Vec> support, std::span<const double> weights) {
    MeanField mf;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        mf.points.push_back(support[i]);
        mf.weights.push_back(weights[i]);
    }
    return mf;
}

double MeanField::mean(std::size_t axis) const {
    double m = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) m += weights[i] * points[i][axis];
    return m;
}

double MeanField::integrate(const std::function<double(const Vec&)>& h) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * h(points[i]);
    return s;
}

Noise::Noise() : atoms_{NoiseAtom{{}, 1.0}}, probs_{1.0} {}

Noise Noise::none() { return Noise(); }

Noise Noise::finite(std::vector<NoiseAtom> atoms) {
    if (atoms.empty()) throw Error(ErrorKind::InvalidArgument, "finite noise needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.prob >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative noise probability");
        total += a.prob;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw Error(ErrorKind::InvalidArgument, "noise probabilities sum to " + std::to_string(total));
    Noise n;
    n.atoms_ = std::move(atoms);
    n.probs_.clear();
    for (const auto& a : n.atoms_) n.probs_.push_back(a.prob);
    return n;
}

Noise Noise::sampled(std::function<Vec(Rng&)> sampler) {
    Noise n;
    n.atoms_.clear();
    n.probs_.clear();
    n.sampler_ = std::move(sampler);
    return n;
}

Vec Noise::sample(Rng& rng) const {
    if (!atoms_.empty()) {
        if (atoms_.size() == 1) {
            rng();  // keep one call per draw
            return atoms_.front().value;
        }
        return atoms_[draw_categorical(rng, probs_)].value;
    }
    return sampler_(rng);
}

void AgentModel::validate(std::uint64_t seed, int samples) const {
    auto fail = [&](const std::string& msg) {
        throw Error(ErrorKind::InvalidArgument, "model '" + name + "': " + msg);
    };
    if (!(beta > 0.0 && beta < 1.0)) fail("beta must lie in (0,1)");
    if (!(K_f >= 0.0) || !(K_c >= 0.0)) fail("Lipschitz constants must be >= 0");
    if (state_bounds.dim() != static_cast<std::size_t>(state_dim)) fail("state_bounds dimension");
    if (action_set.dim() != static_cast<std::size_t>(action_dim)) fail("action_set dimension");
    for (std::size_t d = 0; d < state_bounds.dim(); ++d)
        if (!(state_bounds.lower[d] <= state_bounds.upper[d])) fail("empty state box");
    for (std::size_t d = 0; d < action_set.dim(); ++d)
        if (!(action_set.lower[d] <= action_set.upper[d])) fail("empty action box");
    if (!dynamics || !stage_cost) fail("dynamics and stage cost are required");

    Rng rng = make_stream(seed, {0x7661'6c69ULL});
    auto draw_box = [&](const Box& b) {
        Vec v(b.dim());
        for (std::size_t d = 0; d < b.dim(); ++d)
            v[d] = b.lower[d] + uniform01(rng) * (b.upper[d] - b.lower[d]);
        return v;
    };
    for (int s = 0; s < samples; ++s) {
        std::vector<Vec> cloud{draw_box(state_bounds), draw_box(state_bounds), draw_box(state_bounds)};
        const MeanField mf = MeanField::from_cloud(cloud);
        const Vec x = draw_box(state_bounds);
        const Vec u = draw_box(action_set);
        const Vec wi = idio_noise.sample(rng);
        const Vec w0 = common_noise.sample(rng);
        const Vec next = dynamics(x, u, mf, wi, w0);
        if (!state_bounds.contains(next)) fail("dynamics left state_bounds");
        if (!std::isfinite(stage_cost(x, u, mf))) fail("non-finite stage cost");
    }
}

}  // namespace mfc
